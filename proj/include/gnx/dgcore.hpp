#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gnx/mesh1d.hpp"

namespace gnx {

/// Gauss-Legendre rule on [-1, 1].
struct Quadrature {
    std::vector<double> points;
    std::vector<double> weights;
    int exactness = 0;  ///< highest polynomial degree integrated exactly

    /// Smallest Gauss rule exact for polynomials of the given degree.
    static Quadrature gauss_legendre(int exactness);
    std::size_t size() const noexcept { return points.size(); }
};

/// Modal Legendre basis P_0..P_p on the reference interval.
class Basis {
public:
    explicit Basis(int order);

    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(order_) + 1; }

    double value(std::size_t k, double xi) const;
    double derivative(std::size_t k, double xi) const;
    /// Integral of P_k^2 over [-1, 1].
    double norm2(std::size_t k) const noexcept { return 2.0 / (2.0 * static_cast<double>(k) + 1.0); }
    /// P_k(-1) and P_k(+1).
    double left_value(std::size_t k) const noexcept { return (k % 2 == 0) ? 1.0 : -1.0; }
    double right_value(std::size_t) const noexcept { return 1.0; }

private:
    int order_;
};

/// Piecewise-polynomial field: n_elements x n_components x (p + 1) modal coefficients.
class DgField {
public:
    DgField() = default;
    DgField(std::size_t n_elements, std::size_t n_components, int order);

    std::size_t n_elements() const noexcept { return n_elements_; }
    std::size_t n_components() const noexcept { return n_components_; }
    std::size_t n_modes() const noexcept { return n_modes_; }
    int order() const noexcept { return static_cast<int>(n_modes_) - 1; }

    double& operator()(std::size_t e, std::size_t c, std::size_t k) {
        return data_[(e * n_components_ + c) * n_modes_ + k];
    }
    double operator()(std::size_t e, std::size_t c, std::size_t k) const {
        return data_[(e * n_components_ + c) * n_modes_ + k];
    }
    std::span<double> modes(std::size_t e, std::size_t c) {
        return {data_.data() + (e * n_components_ + c) * n_modes_, n_modes_};
    }
    std::span<const double> modes(std::size_t e, std::size_t c) const {
        return {data_.data() + (e * n_components_ + c) * n_modes_, n_modes_};
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const DgField& other) const noexcept {
        return n_elements_ == other.n_elements_ && n_components_ == other.n_components_ &&
               n_modes_ == other.n_modes_;
    }
    bool all_finite() const noexcept;

    /// Copy of one component as a single-component field.
    DgField component(std::size_t c) const;
    void set_component(std::size_t c, const DgField& src);

private:
    std::size_t n_elements_ = 0;
    std::size_t n_components_ = 0;
    std::size_t n_modes_ = 0;
    std::vector<double> data_;
};

/// Nodal values on every mesh node (interior skeleton and the two boundary nodes).
class TraceField {
public:
    TraceField() = default;
    TraceField(std::size_t n_nodes, std::size_t n_components)
        : n_components_(n_components), data_(n_nodes * n_components, 0.0) {}

    std::size_t n_nodes() const noexcept { return n_components_ ? data_.size() / n_components_ : 0; }
    std::size_t n_components() const noexcept { return n_components_; }
    double& operator()(std::size_t node, std::size_t c) { return data_[node * n_components_ + c]; }
    double operator()(std::size_t node, std::size_t c) const { return data_[node * n_components_ + c]; }
    bool all_finite() const noexcept;

private:
    std::size_t n_components_ = 0;
    std::vector<double> data_;
};

/// Mesh plus basis plus quadrature, with basis tables cached at the quadrature points.
class DgSpace {
public:
    /// quad_exactness < 0 selects the default 2p + 3.
    DgSpace(Mesh1D mesh, int order, int quad_exactness = -1);

    const Mesh1D& mesh() const noexcept { return mesh_; }
    const Basis& basis() const noexcept { return basis_; }
    const Quadrature& quadrature() const noexcept { return quad_; }
    int order() const noexcept { return basis_.order(); }
    std::size_t n_elements() const noexcept { return mesh_.n_elements(); }
    std::size_t n_modes() const noexcept { return basis_.size(); }
    std::size_t n_qp() const noexcept { return quad_.size(); }

    /// P_k(xi_q) and P_k'(xi_q), row-major [q][k].
    double phi(std::size_t q, std::size_t k) const noexcept { return phi_[q * n_modes() + k]; }
    double dphi(std::size_t q, std::size_t k) const noexcept { return dphi_[q * n_modes() + k]; }
    /// Half the element length (dx/dxi).
    double jacobian(std::size_t e) const { return 0.5 * mesh_.length(e); }
    /// Physical coordinate of quadrature point q in element e.
    double qp_x(std::size_t e, std::size_t q) const { return mesh_.to_physical(e, quad_.points[q]); }

    DgField make_field(std::size_t n_components) const {
        return DgField(n_elements(), n_components, order());
    }

    /// Values of every component at all quadrature points: out[(e * n_qp + q)] for component c.
    void eval_at_qp(const DgField& f, std::size_t c, std::vector<double>& out) const;
    /// Values at the left (-1) and right (+1) element endpoints.
    double left_trace(const DgField& f, std::size_t e, std::size_t c) const;
    double right_trace(const DgField& f, std::size_t e, std::size_t c) const;

    /// L2 projection of quadrature-point samples back onto the modes, component c.
    void project_qp(std::span<const double> samples, DgField& out, std::size_t c) const;

private:
    Mesh1D mesh_;
    Basis basis_;
    Quadrature quad_;
    std::vector<double> phi_;
    std::vector<double> dphi_;
};

using PointFunction = std::function<double(double)>;

/// Element-wise L2 projection of f (single-component field).
DgField project(const PointFunction& f, const DgSpace& space);
/// Multi-component projection, one function per component.
DgField project(const std::vector<PointFunction>& f, const DgSpace& space);

/// Evaluate component c of the modal expansion at reference points of element e.
std::vector<double> eval(const DgField& field, const DgSpace& space, std::size_t element,
                         std::span<const double> ref_points, std::size_t c = 0);
double eval_at(const DgField& field, const DgSpace& space, std::size_t element, double xi,
               std::size_t c = 0);
/// Point value at physical x (left-element convention at nodes).
double eval_x(const DgField& field, const DgSpace& space, double x, std::size_t c = 0);

/// DG derivative with centred interface values; one-sided at the domain ends.
DgField weak_derivative(const DgField& field, const DgSpace& space);

/// Exact derivative of the element polynomial, element by element (drops jumps).
DgField element_derivative(const DgField& field, const DgSpace& space);

double element_mean(const DgField& field, std::size_t element, std::size_t c = 0);

/// Integral of component c over the whole mesh.
double integrate(const DgField& field, const DgSpace& space, std::size_t c = 0);

}  // namespace gnx
