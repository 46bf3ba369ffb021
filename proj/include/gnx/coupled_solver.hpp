#pragma once

#include <array>

#include "gnx/dgcore.hpp"
#include "gnx/morpho.hpp"
#include "gnx/physics.hpp"
#include "gnx/swe_solver.hpp"

namespace gnx {

/// (h, hu, b) at a point.
struct CoupledState {
    double h = 0.0;
    double hu = 0.0;
    double b = 0.0;

    HydroState hydro() const noexcept { return {h, hu}; }
};

/// Path integral of the bed pressure term along the linear path from L to R, times n_L:
/// (0, g (h_L + h_R) (b_L - b_R) n_L / 2).
Flux2 w_nc(const CoupledState& pL, const CoupledState& pR, double nL, double g);

struct WaveSpeeds {
    double s_plus;   ///< leftmost signal speed
    double s_minus;  ///< rightmost signal speed
};

/// S+ = min(u+ n - c+, u- n - c-), S- = max(u+ n + c+, u- n + c-).
WaveSpeeds characteristic_speeds(const HydroState& q_plus, const HydroState& q_minus, double n,
                                 double g);

/// ((S- F+ - S+ F-) n - S+ S- (q+ - q-)) / (S- - S+). Throws when S- == S+.
Flux2 hll_flux(const HydroState& q_plus, const HydroState& q_minus, double n, double g);

enum class FluxBranch { Upwind, Subsonic, Downwind };

struct CoupledFlux {
    Flux2 hydro;  ///< (h, hu) flux seen by the "+" element, non-conservative part included
    double bed;   ///< upwinded sediment flux times n
    FluxBranch branch;
};

/// Path-conservative interface flux. The branch terms route the bed-step fluctuation to
/// the downstream side: F+ n + w/2 when S+ > 0, F- n - w/2 when S- < 0, and
/// F_HLL + (S+ + S-) / (2 (S- - S+)) w in between. Together with the +w/2 each
/// neighbour receives from the edge term, the upstream element sees no fluctuation.
CoupledFlux coupled_interface_flux(const CoupledState& p_plus, const CoupledState& p_minus,
                                   double n, double g, const SedimentLaw& law);

/// d(h, hu, b)/dt of the simultaneously coupled shallow water and Exner system.
/// p has three components; friction as in nswe_rhs. The edge term is omitted on the
/// domain boundary. Fronts are treated as in nswe_rhs (wet side sees a wall unless
/// water can flow into the dry element). Bed load moves only on elements at least
/// sediment_min_depth deep.
DgField coupled_rhs(const DgSpace& space, const DgField& p, const PhysicsParams& params,
                    const SedimentLaw& law, const WetMask& mask, double t = 0.0,
                    double sediment_min_depth = 0.0);

}  // namespace gnx
