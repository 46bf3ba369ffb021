#include "gnx/morpho.hpp"

#include <cmath>
#include <stdexcept>

namespace gnx {

namespace {

double magnitude(const SedimentLaw& law, double h, double u) {
    if (const auto* g = std::get_if<Grass>(&law)) return g->A * std::pow(std::abs(u), g->m);
    const auto& gp = std::get<GeneralPower>(law);
    return gp.A(h, u) * std::pow(std::abs(u), gp.m);
}

}  // namespace

void validate(const SedimentLaw& law) {
    const double m = std::visit([](const auto& l) { return l.m; }, law);
    if (!(m >= 1.0 && m <= 3.0)) throw std::invalid_argument("sediment exponent must lie in [1, 3]");
    if (const auto* g = std::get_if<Grass>(&law)) {
        if (!(g->A >= 0.0) || !std::isfinite(g->A))
            throw std::invalid_argument("Grass constant A must be >= 0");
    } else if (!std::get<GeneralPower>(law).A) {
        throw std::invalid_argument("general power law needs an A(h, u) closure");
    }
}

bool is_rigid(const SedimentLaw& law) noexcept {
    const auto* g = std::get_if<Grass>(&law);
    return g != nullptr && g->A == 0.0;
}

double sediment_flux(const HydroState& q, const SedimentLaw& law) {
    if (!(q.h > 0.0)) return 0.0;
    const double u = q.hu / q.h;
    if (u == 0.0) return 0.0;
    const double mag = magnitude(law, q.h, u);
    return u > 0.0 ? mag : -mag;
}

double roe_velocity(const HydroState& q_plus, const HydroState& q_minus) {
    require_wet(q_plus, "roe_velocity");
    require_wet(q_minus, "roe_velocity");
    const double sp = std::sqrt(q_plus.h), sm = std::sqrt(q_minus.h);
    return (q_plus.hu / q_plus.h * sp + q_minus.hu / q_minus.h * sm) / (sp + sm);
}

double upwind_bed_flux(const HydroState& q_plus, const HydroState& q_minus, double, double,
                       const SedimentLaw& law, double n) {
    return roe_velocity(q_plus, q_minus) * n >= 0.0 ? sediment_flux(q_plus, law)
                                                    : sediment_flux(q_minus, law);
}

WetMask sediment_mask(const DgField& q, const WetMask& mask, double min_depth) {
    WetMask out = mask;
    out.wet.resize(q.n_elements(), 1);
    for (std::size_t e = 0; e < q.n_elements(); ++e)
        out.wet[e] = mask.is_wet(e) && q(e, 0, 0) >= min_depth;
    return out;
}

double node_bed_flux(const DgSpace& space, const DgField& q, const WetMask& mask,
                     const SedimentLaw& law, std::size_t node) {
    const std::size_t ne = space.n_elements();
    if (node == 0 || node >= ne) return 0.0;
    const std::size_t L = node - 1, R = node;
    if (!mask.is_wet(L) || !mask.is_wet(R)) return 0.0;
    const HydroState qL{space.right_trace(q, L, 0), space.right_trace(q, L, 1)};
    const HydroState qR{space.left_trace(q, R, 0), space.left_trace(q, R, 1)};
    if (!(qL.h > 0.0) || !(qR.h > 0.0)) return 0.0;
    return upwind_bed_flux(qL, qR, 0.0, 0.0, law, 1.0);
}

DgField exner_rhs(const DgSpace& space, const DgField& q, const DgField& b, const SedimentLaw& law,
                  const WetMask& mask) {
    const std::size_t ne = space.n_elements(), nq = space.n_qp(), nm = space.n_modes();
    if (b.n_elements() != ne || q.n_elements() != ne || q.n_components() < 2)
        throw std::invalid_argument("exner_rhs: field shape mismatch");
    DgField rhs = space.make_field(1);
    if (is_rigid(law)) return rhs;

    std::vector<double> hq, huq;
    space.eval_at_qp(q, 0, hq);
    space.eval_at_qp(q, 1, huq);
    std::vector<double> node_flux(ne + 1, 0.0);
    for (std::size_t n = 1; n < ne; ++n) node_flux[n] = node_bed_flux(space, q, mask, law, n);

    const auto& quad = space.quadrature();
    const auto& basis = space.basis();
    for (std::size_t e = 0; e < ne; ++e) {
        if (!mask.is_wet(e)) continue;
        const double jac = space.jacobian(e);
        for (std::size_t k = 0; k < nm; ++k) {
            double vol = 0.0;
            for (std::size_t i = 0; i < nq; ++i)
                vol += quad.weights[i] * sediment_flux({hq[e * nq + i], huq[e * nq + i]}, law) *
                       space.dphi(i, k);
            const double surf = node_flux[e + 1] * basis.right_value(k) - node_flux[e] * basis.left_value(k);
            rhs(e, 0, k) = (vol - surf) / (jac * basis.norm2(k));
        }
    }
    return rhs;
}

}  // namespace gnx
