#include "gnx/coupled_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "gnx/kernels.hpp"

namespace gnx {

Flux2 w_nc(const CoupledState& pL, const CoupledState& pR, double nL, double g) {
    return {0.0, 0.5 * g * (pL.h + pR.h) * (pL.b - pR.b) * nL};
}

WaveSpeeds characteristic_speeds(const HydroState& q_plus, const HydroState& q_minus, double n,
                                 double g) {
    require_wet(q_plus, "characteristic_speeds");
    require_wet(q_minus, "characteristic_speeds");
    const double up = q_plus.hu / q_plus.h * n, um = q_minus.hu / q_minus.h * n;
    const double cp = std::sqrt(g * q_plus.h), cm = std::sqrt(g * q_minus.h);
    return {std::min(up - cp, um - cm), std::max(up + cp, um + cm)};
}

Flux2 hll_flux(const HydroState& q_plus, const HydroState& q_minus, double n, double g) {
    const WaveSpeeds s = characteristic_speeds(q_plus, q_minus, n, g);
    const double den = s.s_minus - s.s_plus;
    if (!(den > 0.0)) throw std::domain_error("hll_flux: degenerate wave speeds");
    const Flux2 fp = physical_flux(q_plus, g), fm = physical_flux(q_minus, g);
    const double dq[2] = {q_plus.h - q_minus.h, q_plus.hu - q_minus.hu};
    Flux2 out;
    for (int c = 0; c < 2; ++c)
        out[c] = ((s.s_minus * fp[c] - s.s_plus * fm[c]) * n - s.s_plus * s.s_minus * dq[c]) / den;
    return out;
}

CoupledFlux coupled_interface_flux(const CoupledState& p_plus, const CoupledState& p_minus,
                                   double n, double g, const SedimentLaw& law) {
    const HydroState qp = p_plus.hydro(), qm = p_minus.hydro();
    const WaveSpeeds s = characteristic_speeds(qp, qm, n, g);
    const Flux2 w = w_nc(p_plus, p_minus, n, g);
    CoupledFlux out{};
    if (s.s_plus > 0.0) {
        const Flux2 f = physical_flux(qp, g);
        out.hydro = {f[0] * n + 0.5 * w[0], f[1] * n + 0.5 * w[1]};
        out.branch = FluxBranch::Upwind;
    } else if (s.s_minus < 0.0) {
        const Flux2 f = physical_flux(qm, g);
        out.hydro = {f[0] * n - 0.5 * w[0], f[1] * n - 0.5 * w[1]};
        out.branch = FluxBranch::Downwind;
    } else {
        const Flux2 f = hll_flux(qp, qm, n, g);
        const double c = (s.s_plus + s.s_minus) / (2.0 * (s.s_minus - s.s_plus));
        out.hydro = {f[0] + c * w[0], f[1] + c * w[1]};
        out.branch = FluxBranch::Subsonic;
    }
    out.bed = upwind_bed_flux(qp, qm, p_plus.b, p_minus.b, law, n) * n;
    return out;
}

DgField coupled_rhs(const DgSpace& space, const DgField& p, const PhysicsParams& params,
                    const SedimentLaw& law, const WetMask& mask, double t,
                    double sediment_min_depth) {
    const std::size_t ne = space.n_elements(), nq = space.n_qp(), nm = space.n_modes();
    if (p.n_components() != 3 || p.n_elements() != ne)
        throw std::invalid_argument("coupled_rhs expects a three-component field (h, hu, b)");
    const auto& quad = space.quadrature();
    const auto& basis = space.basis();
    const auto& mesh = space.mesh();
    const double g = params.g;
    const bool rigid = is_rigid(law);
    const WetMask moving = sediment_mask(p, mask, sediment_min_depth);

    std::vector<double> hq, huq, bxq;
    space.eval_at_qp(p, 0, hq);
    space.eval_at_qp(p, 1, huq);
    space.eval_at_qp(element_derivative(p.component(2), space), 0, bxq);
    std::vector<double> fmass(ne * nq), fmom(ne * nq), src(ne * nq);
    kernels::swe_point_terms({hq, huq, bxq}, g, params.friction(), {fmass, fmom, src});

    DgField rhs = space.make_field(3);
    for (std::size_t e = 0; e < ne; ++e) {
        const double jac = space.jacobian(e);
        const bool carries = moving.is_wet(e);
        for (std::size_t k = 0; k < nm; ++k) {
            double vm = 0.0, vh = 0.0, sh = 0.0, vb = 0.0;
            for (std::size_t i = 0; i < nq; ++i) {
                const double w = quad.weights[i];
                const std::size_t j = e * nq + i;
                vm += w * fmass[j] * space.dphi(i, k);
                vh += w * fmom[j] * space.dphi(i, k);
                sh += w * src[j] * space.phi(i, k);
                if (carries && !rigid) vb += w * sediment_flux({hq[j], huq[j]}, law) * space.dphi(i, k);
            }
            rhs(e, 0, k) = vm;
            rhs(e, 1, k) = vh + jac * sh;
            rhs(e, 2, k) = vb;
        }
    }

    // Per node: flux seen by the left element (n = +1) and the right element (n = -1),
    // each already including that element's share of the edge term.
    std::array<double, 3> zero{0.0, 0.0, 0.0};
    std::vector<std::array<double, 3>> from_left(ne + 1, zero), from_right(ne + 1, zero);
    auto end_state = [&](std::size_t e, bool right) {
        return right ? CoupledState{space.right_trace(p, e, 0), space.right_trace(p, e, 1),
                                    space.right_trace(p, e, 2)}
                     : CoupledState{space.left_trace(p, e, 0), space.left_trace(p, e, 1),
                                    space.left_trace(p, e, 2)};
    };
    auto wall = [&](const CoupledState& s, double n) {
        const Flux2 f = hll_flux(s.hydro(), HydroState{s.h, -s.hu}, n, g);
        return std::array<double, 3>{f[0], f[1], 0.0};
    };

    for (std::size_t node = 1; node < ne; ++node) {
        const std::size_t L = node - 1, R = node;
        const CoupledState pL = end_state(L, true), pR = end_state(R, false);
        const bool wl = mask.is_wet(L), wr = mask.is_wet(R);
        FaceMode mode = FaceMode::Normal;
        if (!(wl && wr)) {
            const double surf = wl ? pL.h + pL.b : pR.h + pR.b;
            const double dry_bed = wl ? p(R, 2, 0) : p(L, 2, 0);
            mode = classify_face(wl, wr, surf, dry_bed, mask.h0);
        }
        if (mode == FaceMode::Normal) {
            const CoupledFlux f = coupled_interface_flux(pL, pR, 1.0, g, law);
            const Flux2 w = w_nc(pL, pR, 1.0, g);
            const double bed = (moving.is_wet(L) && moving.is_wet(R)) ? f.bed : 0.0;
            if (!wl && f.hydro[0] >= 0.0) mode = FaceMode::WallForRight;
            else if (!wr && f.hydro[0] <= 0.0) mode = FaceMode::WallForLeft;
            else {
                // element flux minus its half of the edge term
                from_left[node] = {f.hydro[0] - 0.5 * w[0], f.hydro[1] - 0.5 * w[1], bed};
                from_right[node] = {-f.hydro[0] - 0.5 * w[0], -f.hydro[1] - 0.5 * w[1], -bed};
            }
        }
        if (mode == FaceMode::WallForLeft) from_left[node] = wall(pL, +1.0);
        if (mode == FaceMode::WallForRight) from_right[node] = wall(pR, -1.0);
    }

    auto boundary = [&](std::size_t e, bool right_end) {
        const CoupledState s = end_state(e, right_end);
        const double n = right_end ? 1.0 : -1.0;
        const BoundaryKind& tag = right_end ? mesh.right_tag() : mesh.left_tag();
        HydroState ghost{s.h, -s.hu};
        if (const auto* wm = std::get_if<Wavemaker>(&tag)) {
            ghost.h = wm->elevation(t) + params.H0 - s.b;
            ghost.hu = s.hu;
            if (!(ghost.h > 0.0)) throw std::domain_error("wavemaker prescribes a non-positive depth");
        }
        const Flux2 f = hll_flux(s.hydro(), ghost, n, g);
        return std::array<double, 3>{f[0], f[1], 0.0};
    };
    if (mask.is_wet(0)) from_right[0] = boundary(0, false);
    if (mask.is_wet(ne - 1)) from_left[ne] = boundary(ne - 1, true);

    for (std::size_t e = 0; e < ne; ++e) {
        const double jac = space.jacobian(e);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < nm; ++k) {
                const double surf = from_left[e + 1][c] * basis.right_value(k) +
                                    from_right[e][c] * basis.left_value(k);
                rhs(e, c, k) = (rhs(e, c, k) - surf) / (jac * basis.norm2(k));
            }
        if (!mask.is_wet(e))
            for (std::size_t k = 0; k < nm; ++k) rhs(e, 1, k) = 0.0;
        if (!moving.is_wet(e))
            for (std::size_t k = 0; k < nm; ++k) rhs(e, 2, k) = 0.0;
    }
    return rhs;
}

}  // namespace gnx
