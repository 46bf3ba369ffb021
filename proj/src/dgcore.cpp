#include "gnx/dgcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gnx {

namespace {

// Legendre P_n and P_n' by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
    if (n == 0) return {1.0, 0.0};
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    const double nn = static_cast<double>(n);
    double dp;
    if (std::abs(x) == 1.0) {
        dp = 0.5 * nn * (nn + 1.0) * ((n % 2 == 1 || x > 0.0) ? 1.0 : -1.0);
    } else {
        dp = nn * (x * p1 - p0) / (x * x - 1.0);
    }
    return {p1, dp};
}

}  // namespace

Quadrature Quadrature::gauss_legendre(int exactness) {
    if (exactness < 0) throw std::invalid_argument("quadrature exactness must be >= 0");
    const std::size_t n = static_cast<std::size_t>(exactness) / 2 + 1;
    Quadrature quad;
    quad.points.resize(n);
    quad.weights.resize(n);
    quad.exactness = static_cast<int>(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double x = -std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                             (static_cast<double>(n) + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [p, dp] = legendre(n, x);
        quad.points[i] = x;
        quad.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return quad;
}

Basis::Basis(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("basis order must be >= 0");
}

double Basis::value(std::size_t k, double xi) const { return legendre(k, xi).first; }
double Basis::derivative(std::size_t k, double xi) const { return legendre(k, xi).second; }

DgField::DgField(std::size_t n_elements, std::size_t n_components, int order)
    : n_elements_(n_elements),
      n_components_(n_components),
      n_modes_(static_cast<std::size_t>(order) + 1),
      data_(n_elements * n_components * n_modes_, 0.0) {
    if (order < 0) throw std::invalid_argument("field order must be >= 0");
}

bool DgField::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DgField DgField::component(std::size_t c) const {
    DgField out(n_elements_, 1, order());
    for (std::size_t e = 0; e < n_elements_; ++e)
        for (std::size_t k = 0; k < n_modes_; ++k) out(e, 0, k) = (*this)(e, c, k);
    return out;
}

void DgField::set_component(std::size_t c, const DgField& src) {
    for (std::size_t e = 0; e < n_elements_; ++e)
        for (std::size_t k = 0; k < n_modes_; ++k) (*this)(e, c, k) = src(e, 0, k);
}

bool TraceField::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DgSpace::DgSpace(Mesh1D mesh, int order, int quad_exactness)
    : mesh_(std::move(mesh)),
      basis_(order),
      quad_(Quadrature::gauss_legendre(quad_exactness < 0 ? 2 * order + 3 : quad_exactness)) {
    const std::size_t nq = quad_.size(), nm = basis_.size();
    phi_.resize(nq * nm);
    dphi_.resize(nq * nm);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t k = 0; k < nm; ++k) {
            phi_[q * nm + k] = basis_.value(k, quad_.points[q]);
            dphi_[q * nm + k] = basis_.derivative(k, quad_.points[q]);
        }
}

void DgSpace::eval_at_qp(const DgField& f, std::size_t c, std::vector<double>& out) const {
    const std::size_t ne = n_elements(), nq = n_qp(), nm = n_modes();
    out.resize(ne * nq);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto m = f.modes(e, c);
        for (std::size_t q = 0; q < nq; ++q) {
            double v = 0.0;
            for (std::size_t k = 0; k < nm; ++k) v += m[k] * phi_[q * nm + k];
            out[e * nq + q] = v;
        }
    }
}

double DgSpace::left_trace(const DgField& f, std::size_t e, std::size_t c) const {
    const auto m = f.modes(e, c);
    double v = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) v += m[k] * basis_.left_value(k);
    return v;
}

double DgSpace::right_trace(const DgField& f, std::size_t e, std::size_t c) const {
    const auto m = f.modes(e, c);
    double v = 0.0;
    for (double mk : m) v += mk;
    return v;
}

void DgSpace::project_qp(std::span<const double> samples, DgField& out, std::size_t c) const {
    const std::size_t ne = n_elements(), nq = n_qp(), nm = n_modes();
    for (std::size_t e = 0; e < ne; ++e) {
        auto m = out.modes(e, c);
        for (std::size_t k = 0; k < nm; ++k) {
            double acc = 0.0;
            for (std::size_t q = 0; q < nq; ++q)
                acc += quad_.weights[q] * samples[e * nq + q] * phi_[q * nm + k];
            m[k] = acc / basis_.norm2(k);
        }
    }
}

DgField project(const PointFunction& f, const DgSpace& space) {
    return project(std::vector<PointFunction>{f}, space);
}

DgField project(const std::vector<PointFunction>& f, const DgSpace& space) {
    DgField out = space.make_field(f.size());
    std::vector<double> samples(space.n_elements() * space.n_qp());
    for (std::size_t c = 0; c < f.size(); ++c) {
        for (std::size_t e = 0; e < space.n_elements(); ++e)
            for (std::size_t q = 0; q < space.n_qp(); ++q) {
                const double v = f[c](space.qp_x(e, q));
                if (!std::isfinite(v))
                    throw std::domain_error("projection sample is not finite at x = " +
                                            std::to_string(space.qp_x(e, q)));
                samples[e * space.n_qp() + q] = v;
            }
        space.project_qp(samples, out, c);
    }
    return out;
}

double eval_at(const DgField& field, const DgSpace& space, std::size_t element, double xi,
               std::size_t c) {
    if (element >= field.n_elements())
        throw std::out_of_range("element " + std::to_string(element) + " out of range");
    const auto m = field.modes(element, c);
    double v = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) v += m[k] * space.basis().value(k, xi);
    return v;
}

std::vector<double> eval(const DgField& field, const DgSpace& space, std::size_t element,
                         std::span<const double> ref_points, std::size_t c) {
    std::vector<double> out;
    out.reserve(ref_points.size());
    for (double xi : ref_points) {
        if (!(xi >= -1.0 && xi <= 1.0))
            throw std::out_of_range("reference point outside [-1, 1]");
        out.push_back(eval_at(field, space, element, xi, c));
    }
    return out;
}

double eval_x(const DgField& field, const DgSpace& space, double x, std::size_t c) {
    const std::size_t e = space.mesh().locate(x);
    return eval_at(field, space, e, space.mesh().to_reference(e, x), c);
}

DgField weak_derivative(const DgField& field, const DgSpace& space) {
    const std::size_t ne = space.n_elements(), nq = space.n_qp(), nm = space.n_modes();
    const auto& quad = space.quadrature();
    const auto& basis = space.basis();
    DgField out(ne, field.n_components(), field.order());
    std::vector<double> fq;
    std::vector<double> node_value(ne + 1);
    for (std::size_t c = 0; c < field.n_components(); ++c) {
        space.eval_at_qp(field, c, fq);
        node_value[0] = space.left_trace(field, 0, c);
        node_value[ne] = space.right_trace(field, ne - 1, c);
        for (std::size_t n = 1; n < ne; ++n)
            node_value[n] = 0.5 * (space.right_trace(field, n - 1, c) + space.left_trace(field, n, c));
        for (std::size_t e = 0; e < ne; ++e) {
            const double jac = space.jacobian(e);
            for (std::size_t k = 0; k < nm; ++k) {
                double vol = 0.0;
                for (std::size_t q = 0; q < nq; ++q)
                    vol += quad.weights[q] * fq[e * nq + q] * space.dphi(q, k);
                const double surf = node_value[e + 1] * basis.right_value(k) -
                                    node_value[e] * basis.left_value(k);
                out(e, c, k) = (surf - vol) / (jac * basis.norm2(k));
            }
        }
    }
    return out;
}

DgField element_derivative(const DgField& field, const DgSpace& space) {
    const std::size_t ne = space.n_elements(), nm = space.n_modes();
    DgField out(ne, field.n_components(), field.order());
    // d/dxi P_n = sum over m < n with n - m odd of (2m + 1) P_m
    for (std::size_t e = 0; e < ne; ++e) {
        const double jac = space.jacobian(e);
        for (std::size_t c = 0; c < field.n_components(); ++c)
            for (std::size_t n = 1; n < nm; ++n)
                for (std::size_t m = n % 2 == 0 ? 1 : 0; m < n; m += 2)
                    out(e, c, m) += field(e, c, n) * (2.0 * static_cast<double>(m) + 1.0) / jac;
    }
    return out;
}

double element_mean(const DgField& field, std::size_t element, std::size_t c) {
    if (element >= field.n_elements())
        throw std::out_of_range("element " + std::to_string(element) + " out of range");
    return field(element, c, 0);
}

double integrate(const DgField& field, const DgSpace& space, std::size_t c) {
    double total = 0.0;
    for (std::size_t e = 0; e < field.n_elements(); ++e)
        total += field(e, c, 0) * space.mesh().length(e);
    return total;
}

}  // namespace gnx
