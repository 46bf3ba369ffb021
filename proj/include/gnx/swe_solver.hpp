#pragma once

#include "gnx/dgcore.hpp"
#include "gnx/mesh1d.hpp"
#include "gnx/physics.hpp"

namespace gnx {

/// (hu, hu^2 / h + g h^2 / 2)
Flux2 physical_flux(const HydroState& q, double g);

/// |u n| + sqrt(g h)
double lambda_max(const HydroState& q, double n, double g);

/// Single-valued numerical flux seen by one side: F(q_hat) n + lambda_max(q_hat) (q_side - q_hat).
Flux2 hdg_flux(const HydroState& q_side, const HydroState& q_hat, double n, double g);

struct TraceOptions {
    double tol = 1e-12;
    int max_iter = 50;
};

struct TraceResult {
    HydroState q;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Newton solve for the node trace that makes the HDG flux single valued:
/// sum over both sides of F(q_hat) n + tau(q_hat) (q_side - q_hat) = 0, tau = lambda_max(q_hat).
/// Starts from the arithmetic mean. Non-convergence is reported, not thrown.
TraceResult solve_trace(const HydroState& q_left, const HydroState& q_right, double g,
                        const TraceOptions& opt = {});

/// Residual of the trace condition at q_hat (left side has n = +1, right side n = -1).
Flux2 trace_residual(const HydroState& q_left, const HydroState& q_right, const HydroState& q_hat,
                     double g);

/// Boundary trace: wall -> (h, 0); wavemaker -> (zeta(t) + H0 - b, hu_interior).
HydroState boundary_trace(const HydroState& q_interior, const BoundaryKind& kind, double t,
                          const PhysicsParams& params, double b_here);

/// Lax-Friedrichs fallback flux for the side with outward normal n.
Flux2 lax_friedrichs_flux(const HydroState& q_in, const HydroState& q_out, double n, double g);

/// Semi-discrete rhs d(h, hu)/dt of the shallow water equations over the rigid bed b:
/// volume flux, HDG interface flux, -g h db/dx and optional friction -cf |u| u.
/// Dry elements get no momentum change; they only receive mass across open fronts.
DgField nswe_rhs(const DgSpace& space, const DgField& q, const DgField& b,
                 const PhysicsParams& params, const WetMask& mask, double t = 0.0,
                 const TraceOptions& opt = {});

/// Count of trace solves that fell back to the Lax-Friedrichs flux since start-up.
std::size_t trace_fallback_count() noexcept;

}  // namespace gnx
