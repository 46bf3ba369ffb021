#include "gnx/mesh1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gnx {

Wavemaker Wavemaker::periodic(double amplitude, double period, double ramp_periods) {
    Wavemaker w;
    w.amplitude = amplitude;
    w.period = period;
    w.ramp_periods = ramp_periods;
    validate(BoundaryKind{w});
    return w;
}

Wavemaker Wavemaker::tabulated(std::vector<std::pair<double, double>> series) {
    Wavemaker w;
    w.series = std::move(series);
    validate(BoundaryKind{w});
    return w;
}

double Wavemaker::elevation(double t) const {
    if (is_periodic()) {
        double ramp = 1.0;
        if (ramp_periods > 0.0) {
            const double s = t / (ramp_periods * period);
            ramp = s <= 0.0 ? 0.0 : (s >= 1.0 ? 1.0 : s * s * (3.0 - 2.0 * s));
        }
        return ramp * amplitude * std::sin(2.0 * std::numbers::pi * t / period);
    }
    if (t <= series.front().first) return series.front().second;
    if (t >= series.back().first) return series.back().second;
    auto it = std::upper_bound(series.begin(), series.end(), t,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& [t1, z1] = *it;
    const auto& [t0, z0] = *(it - 1);
    return z0 + (z1 - z0) * (t - t0) / (t1 - t0);
}

void validate(const BoundaryKind& kind) {
    if (const auto* w = std::get_if<Wavemaker>(&kind)) {
        if (w->is_periodic()) {
            if (!(w->amplitude > 0.0) || !(w->period > 0.0) || !std::isfinite(w->amplitude) ||
                !std::isfinite(w->period))
                throw std::invalid_argument("wavemaker needs amplitude > 0 and period > 0");
            if (!(w->ramp_periods >= 0.0))
                throw std::invalid_argument("wavemaker ramp must be non-negative");
        } else {
            for (std::size_t i = 0; i < w->series.size(); ++i) {
                if (!std::isfinite(w->series[i].first) || !std::isfinite(w->series[i].second))
                    throw std::invalid_argument("wavemaker series has non-finite entries");
                if (i > 0 && !(w->series[i].first > w->series[i - 1].first))
                    throw std::invalid_argument("wavemaker series times must increase");
            }
        }
    }
}

Mesh1D::Mesh1D(std::vector<double> nodes, BoundaryKind left, BoundaryKind right)
    : nodes_(std::move(nodes)), left_(std::move(left)), right_(std::move(right)) {
    if (nodes_.size() < 2) throw std::invalid_argument("mesh needs at least one element");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) throw std::invalid_argument("mesh node is not finite");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw std::invalid_argument("mesh nodes must be strictly increasing");
    }
    validate(left_);
    validate(right_);
    elements_.reserve(nodes_.size() - 1);
    for (std::size_t e = 0; e + 1 < nodes_.size(); ++e) elements_.push_back({e, e + 1});
    for (std::size_t n = 1; n + 1 < nodes_.size(); ++n) skeleton_.push_back(n);
}

double Mesh1D::min_length() const noexcept {
    double m = length(0);
    for (std::size_t e = 1; e < n_elements(); ++e) m = std::min(m, length(e));
    return m;
}

const BoundaryKind& Mesh1D::boundary_tag(std::size_t node) const {
    if (node == 0) return left_;
    if (node + 1 == nodes_.size()) return right_;
    throw std::out_of_range("node " + std::to_string(node) + " is not a boundary node");
}

std::size_t Mesh1D::locate(double x) const {
    if (!(x >= x_min() && x <= x_max()))
        throw std::out_of_range("point " + std::to_string(x) + " lies outside the mesh");
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    const auto idx = static_cast<std::size_t>(it - nodes_.begin());
    return idx == 0 ? 0 : idx - 1;
}

double Mesh1D::to_reference(std::size_t e, double x) const {
    return (2.0 * x - x_left(e) - x_right(e)) / length(e);
}

double Mesh1D::to_physical(std::size_t e, double xi) const {
    return center(e) + 0.5 * length(e) * xi;
}

Mesh1D build_uniform_mesh(double x_min, double x_max, std::size_t n_elements,
                          std::pair<BoundaryKind, BoundaryKind> tags) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("mesh bounds must be finite");
    if (!(x_min < x_max)) throw std::invalid_argument("mesh needs x_min < x_max");
    if (n_elements == 0) throw std::invalid_argument("mesh needs at least one element");
    std::vector<double> nodes(n_elements + 1);
    const double dx = (x_max - x_min) / static_cast<double>(n_elements);
    for (std::size_t i = 0; i <= n_elements; ++i) nodes[i] = x_min + dx * static_cast<double>(i);
    nodes.back() = x_max;
    return Mesh1D(std::move(nodes), std::move(tags.first), std::move(tags.second));
}

std::pair<std::optional<std::size_t>, std::optional<std::size_t>> neighbors(const Mesh1D& mesh,
                                                                            std::size_t node) {
    if (node >= mesh.n_nodes())
        throw std::out_of_range("node index " + std::to_string(node) + " out of range");
    std::optional<std::size_t> left, right;
    if (node > 0) left = node - 1;
    if (node < mesh.n_elements()) right = node;
    return {left, right};
}

}  // namespace gnx
