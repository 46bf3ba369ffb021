#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gnx/dgcore.hpp"
#include "gnx/physics.hpp"

namespace gnx {

/// Unknowns of the first-order dispersive system: w1, w2 in each active element and
/// the trace of w1 on the nodes.
struct DispersiveSolution {
    DgField w1;
    DgField w2;
    TraceField w1_hat;
};

/// Active elements take part in the dispersive solve; inactive ones (dry or breaking)
/// keep the pure shallow-water update and present a wall (w1_hat = 0) to their neighbours.
using ActiveSet = std::vector<std::uint8_t>;

/// Q1(u) in one dimension: -2 R1((u_x)^2) + R2(u^2 b_xx), derivatives taken weakly.
DgField compute_q1(const DgSpace& space, const DgField& u, const DgField& b, const DgField& h);

/// s(q) = g h zeta_x / alpha + h Q1(u).
DgField compute_source_s(const DgSpace& space, const DgField& q, const DgField& b,
                         const PhysicsParams& params);

/// Hybridized DG operator for (w1, w2) at frozen depth and bed. The per-element
/// local systems and the condensed tridiagonal skeleton matrix are factorized once
/// and reused for every right-hand side s.
class DispersiveOperator {
public:
    DispersiveOperator(const DgSpace& space, const DgField& h, const DgField& b,
                       const PhysicsParams& params, double tau, ActiveSet active);

    DispersiveSolution solve(const DgField& s) const;

    /// Number of skeleton unknowns in the condensed system.
    std::size_t condensed_size() const noexcept { return unknown_nodes_.size(); }
    const ActiveSet& active() const noexcept { return active_; }

    /// Condensed skeleton matrix as (sub, diag, super) diagonals before factorization.
    const std::vector<double>& sub() const noexcept { return dl_; }
    const std::vector<double>& diag() const noexcept { return d_; }
    const std::vector<double>& super() const noexcept { return du_; }

private:
    struct Local {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu;
        Eigen::MatrixXd z;  ///< A^-1 B, columns for the left and right node traces
    };

    Eigen::VectorXd local_rhs(std::size_t e, const std::vector<double>& sq) const;
    double flux_left_elem(const Eigen::VectorXd& x) const;   // w2(+1) - tau w1(+1)
    double flux_right_elem(const Eigen::VectorXd& x) const;  // -w2(-1) - tau w1(-1)

    const DgSpace* space_;
    double tau_;
    ActiveSet active_;
    std::vector<Local> local_;
    std::vector<long> node_index_;  ///< node -> condensed index, -1 when fixed to zero
    std::vector<std::size_t> unknown_nodes_;
    std::vector<double> dl_, d_, du_;
    // LAPACK dgttrf factors
    std::vector<double> fdl_, fd_, fdu_, fdu2_;
    std::vector<int> ipiv_;
};

DispersiveSolution solve_w1w2(const DgSpace& space, const DgField& q, const DgField& b,
                              const DgField& s, double tau, const PhysicsParams& params,
                              const ActiveSet& active);

/// Time derivative of the dispersive correction: mass 0, momentum -(w1 - g h zeta_x / alpha),
/// zero on inactive elements.
DgField dispersive_rhs(const DgSpace& space, const DgField& q, const DgField& w1, const DgField& b,
                       const PhysicsParams& params, const ActiveSet& active);

/// Free-surface elevation zeta = h + b - H0 as a field.
DgField surface_elevation(const DgField& q, const DgField& b, double H0);

}  // namespace gnx
