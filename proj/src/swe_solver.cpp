#include "gnx/swe_solver.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "gnx/kernels.hpp"

namespace gnx {

namespace {

std::atomic<std::size_t> g_fallbacks{0};

double inf_norm(const Flux2& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

}  // namespace

Flux2 physical_flux(const HydroState& q, double g) {
    require_wet(q, "physical_flux");
    const double u = q.hu / q.h;
    return {q.hu, q.hu * u + 0.5 * g * (q.h * q.h)};
}

double lambda_max(const HydroState& q, double n, double g) {
    require_wet(q, "lambda_max");
    return std::abs(q.hu / q.h * n) + std::sqrt(g * q.h);
}

Flux2 hdg_flux(const HydroState& q_side, const HydroState& q_hat, double n, double g) {
    const Flux2 f = physical_flux(q_hat, g);
    const double tau = lambda_max(q_hat, n, g);
    return {f[0] * n + tau * (q_side.h - q_hat.h), f[1] * n + tau * (q_side.hu - q_hat.hu)};
}

Flux2 trace_residual(const HydroState& q_left, const HydroState& q_right, const HydroState& q_hat,
                     double g) {
    const Flux2 a = hdg_flux(q_left, q_hat, +1.0, g);
    const Flux2 b = hdg_flux(q_right, q_hat, -1.0, g);
    return {a[0] + b[0], a[1] + b[1]};
}

TraceResult solve_trace(const HydroState& q_left, const HydroState& q_right, double g,
                        const TraceOptions& opt) {
    require_wet(q_left, "solve_trace");
    require_wet(q_right, "solve_trace");
    TraceResult res;
    HydroState x{0.5 * (q_left.h + q_right.h), 0.5 * (q_left.hu + q_right.hu)};
    for (int it = 0;; ++it) {
        const Flux2 r = trace_residual(q_left, q_right, x, g);
        res.q = x;
        res.iterations = it;
        res.residual = inf_norm(r);
        if (res.residual <= opt.tol) {
            res.converged = true;
            return res;
        }
        if (it >= opt.max_iter) return res;

        // Jacobian of sum_s [F(x) n_s + tau(x) (q_s - x)]; the F terms cancel for n = +1, -1.
        const double u = x.hu / x.h;
        const double c = std::sqrt(g * x.h);
        const double tau = std::abs(u) + c;
        const double sgn = (u > 0.0) - (u < 0.0);
        const double dtau_dh = -sgn * u / x.h + 0.5 * c / x.h;
        const double dtau_dhu = sgn / x.h;
        const double sh = q_left.h + q_right.h - 2.0 * x.h;
        const double shu = q_left.hu + q_right.hu - 2.0 * x.hu;
        const double j00 = sh * dtau_dh - 2.0 * tau, j01 = sh * dtau_dhu;
        const double j10 = shu * dtau_dh, j11 = shu * dtau_dhu - 2.0 * tau;
        const double det = j00 * j11 - j01 * j10;
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) return res;
        const double dh = (r[0] * j11 - r[1] * j01) / det;
        const double dhu = (j00 * r[1] - j10 * r[0]) / det;
        x.h -= dh;
        x.hu -= dhu;
        if (!(x.h > 0.0) || !std::isfinite(x.hu)) return res;
    }
}

HydroState boundary_trace(const HydroState& q_interior, const BoundaryKind& kind, double t,
                          const PhysicsParams& params, double b_here) {
    require_wet(q_interior, "boundary_trace");
    if (std::holds_alternative<Reflecting>(kind)) return {q_interior.h, 0.0};
    const auto& wm = std::get<Wavemaker>(kind);
    const double h = wm.elevation(t) + params.H0 - b_here;
    if (!(h > 0.0)) throw std::domain_error("wavemaker prescribes a non-positive depth");
    return {h, q_interior.hu};
}

Flux2 lax_friedrichs_flux(const HydroState& q_in, const HydroState& q_out, double n, double g) {
    const Flux2 fi = physical_flux(q_in, g), fo = physical_flux(q_out, g);
    const double lam = std::max(lambda_max(q_in, n, g), lambda_max(q_out, n, g));
    return {0.5 * (fi[0] + fo[0]) * n + 0.5 * lam * (q_in.h - q_out.h),
            0.5 * (fi[1] + fo[1]) * n + 0.5 * lam * (q_in.hu - q_out.hu)};
}

std::size_t trace_fallback_count() noexcept { return g_fallbacks.load(); }

DgField nswe_rhs(const DgSpace& space, const DgField& q, const DgField& b,
                 const PhysicsParams& params, const WetMask& mask, double t,
                 const TraceOptions& opt) {
    const std::size_t ne = space.n_elements(), nq = space.n_qp(), nm = space.n_modes();
    const auto& quad = space.quadrature();
    const auto& basis = space.basis();
    const auto& mesh = space.mesh();
    const double g = params.g;

    std::vector<double> hq, huq, bxq;
    space.eval_at_qp(q, 0, hq);
    space.eval_at_qp(q, 1, huq);
    space.eval_at_qp(element_derivative(b, space), 0, bxq);
    std::vector<double> fmass(ne * nq), fmom(ne * nq), src(ne * nq);
    kernels::swe_point_terms({hq, huq, bxq}, g, params.friction(), {fmass, fmom, src});

    DgField rhs = space.make_field(2);
    for (std::size_t e = 0; e < ne; ++e) {
        const double jac = space.jacobian(e);
        for (std::size_t k = 0; k < nm; ++k) {
            double vm = 0.0, vh = 0.0, sh = 0.0;
            for (std::size_t qp = 0; qp < nq; ++qp) {
                const double w = quad.weights[qp];
                vm += w * fmass[e * nq + qp] * space.dphi(qp, k);
                vh += w * fmom[e * nq + qp] * space.dphi(qp, k);
                sh += w * src[e * nq + qp] * space.phi(qp, k);
            }
            rhs(e, 0, k) = vm;
            rhs(e, 1, k) = vh + jac * sh;
        }
    }

    // flux_left[n]: flux seen by the element left of node n (outward normal +1);
    // flux_right[n]: by the element right of node n (outward normal -1).
    std::vector<Flux2> flux_left(ne + 1, Flux2{0.0, 0.0}), flux_right(ne + 1, Flux2{0.0, 0.0});
    auto state_right_end = [&](std::size_t e) {
        return HydroState{space.right_trace(q, e, 0), space.right_trace(q, e, 1)};
    };
    auto state_left_end = [&](std::size_t e) {
        return HydroState{space.left_trace(q, e, 0), space.left_trace(q, e, 1)};
    };
    auto wall = [&](const HydroState& qi, double n) {
        return hdg_flux(qi, HydroState{qi.h, 0.0}, n, g);
    };

    for (std::size_t node = 1; node < ne; ++node) {
        const std::size_t L = node - 1, R = node;
        const HydroState qL = state_right_end(L), qR = state_left_end(R);
        const bool wl = mask.is_wet(L), wr = mask.is_wet(R);
        FaceMode mode = FaceMode::Normal;
        if (!(wl && wr)) {
            const double surf = wl ? qL.h + space.right_trace(b, L, 0) : qR.h + space.left_trace(b, R, 0);
            const double dry_bed = wl ? b(R, 0, 0) : b(L, 0, 0);
            mode = classify_face(wl, wr, surf, dry_bed, mask.h0);
        }
        if (mode == FaceMode::Normal) {
            const TraceResult tr = solve_trace(qL, qR, g, opt);
            Flux2 fl, fr;
            if (tr.converged) {
                fl = hdg_flux(qL, tr.q, +1.0, g);
                fr = hdg_flux(qR, tr.q, -1.0, g);
            } else {
                ++g_fallbacks;
                fl = lax_friedrichs_flux(qL, qR, +1.0, g);
                fr = {-fl[0], -fl[1]};
            }
            // water may only cross a front from the wet side
            if (!wl && fr[0] <= 0.0) mode = FaceMode::WallForRight;
            else if (!wr && fl[0] <= 0.0) mode = FaceMode::WallForLeft;
            else {
                flux_left[node] = fl;
                flux_right[node] = fr;
            }
        }
        if (mode == FaceMode::WallForLeft) flux_left[node] = wall(qL, +1.0);
        if (mode == FaceMode::WallForRight) flux_right[node] = wall(qR, -1.0);
    }

    if (mask.is_wet(0)) {
        const HydroState qi = state_left_end(0);
        const HydroState qh = boundary_trace(qi, mesh.left_tag(), t, params, space.left_trace(b, 0, 0));
        flux_right[0] = hdg_flux(qi, qh, -1.0, g);
    }
    if (mask.is_wet(ne - 1)) {
        const HydroState qi = state_right_end(ne - 1);
        const HydroState qh =
            boundary_trace(qi, mesh.right_tag(), t, params, space.right_trace(b, ne - 1, 0));
        flux_left[ne] = hdg_flux(qi, qh, +1.0, g);
    }

    for (std::size_t e = 0; e < ne; ++e) {
        const double jac = space.jacobian(e);
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t k = 0; k < nm; ++k) {
                const double surf = flux_left[e + 1][c] * basis.right_value(k) +
                                    flux_right[e][c] * basis.left_value(k);
                rhs(e, c, k) = (rhs(e, c, k) - surf) / (jac * basis.norm2(k));
            }
        if (!mask.is_wet(e))
            for (std::size_t k = 0; k < nm; ++k) rhs(e, 1, k) = 0.0;
    }
    return rhs;
}

}  // namespace gnx
