#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace gnx {

/// Wall boundary: zero normal momentum.
struct Reflecting {};

/// Free-surface elevation forcing. Either a periodic wave
/// zeta(t) = ramp(t) * amplitude * sin(2 pi t / period), or a tabulated
/// series (t, zeta) interpolated linearly and held constant outside its span.
struct Wavemaker {
    double amplitude = 0.0;
    double period = 0.0;
    double ramp_periods = 0.0;
    std::vector<std::pair<double, double>> series;

    static Wavemaker periodic(double amplitude, double period, double ramp_periods = 0.0);
    static Wavemaker tabulated(std::vector<std::pair<double, double>> series);

    bool is_periodic() const noexcept { return series.empty(); }
    double elevation(double t) const;
};

using BoundaryKind = std::variant<Reflecting, Wavemaker>;

void validate(const BoundaryKind& kind);

/// Ordered partition of [x_min, x_max] into intervals. Element e spans
/// nodes e and e + 1; the skeleton is the set of interior nodes.
class Mesh1D {
public:
    Mesh1D(std::vector<double> nodes, BoundaryKind left, BoundaryKind right);

    std::size_t n_elements() const noexcept { return elements_.size(); }
    std::size_t n_nodes() const noexcept { return nodes_.size(); }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<std::array<std::size_t, 2>>& elements() const noexcept { return elements_; }
    const std::vector<std::size_t>& skeleton() const noexcept { return skeleton_; }

    double x_min() const noexcept { return nodes_.front(); }
    double x_max() const noexcept { return nodes_.back(); }
    double x_left(std::size_t e) const { return nodes_[elements_.at(e)[0]]; }
    double x_right(std::size_t e) const { return nodes_[elements_.at(e)[1]]; }
    double length(std::size_t e) const { return x_right(e) - x_left(e); }
    double center(std::size_t e) const { return 0.5 * (x_left(e) + x_right(e)); }
    double min_length() const noexcept;

    bool is_boundary(std::size_t node) const noexcept {
        return node == 0 || node + 1 == nodes_.size();
    }
    const BoundaryKind& left_tag() const noexcept { return left_; }
    const BoundaryKind& right_tag() const noexcept { return right_; }
    /// Tag of a boundary node; throws for interior nodes.
    const BoundaryKind& boundary_tag(std::size_t node) const;

    /// Element containing x. Points on an interior node belong to the element
    /// on its left; x_min belongs to element 0.
    std::size_t locate(double x) const;

    /// Reference coordinate in [-1, 1] of x inside element e.
    double to_reference(std::size_t e, double x) const;
    double to_physical(std::size_t e, double xi) const;

private:
    std::vector<double> nodes_;
    std::vector<std::array<std::size_t, 2>> elements_;
    std::vector<std::size_t> skeleton_;
    BoundaryKind left_;
    BoundaryKind right_;
};

Mesh1D build_uniform_mesh(double x_min, double x_max, std::size_t n_elements,
                          std::pair<BoundaryKind, BoundaryKind> tags);

/// Elements adjacent to a node: (left, right). Boundary nodes have one side empty.
std::pair<std::optional<std::size_t>, std::optional<std::size_t>> neighbors(const Mesh1D& mesh,
                                                                            std::size_t node);

}  // namespace gnx
