#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnx/dgcore.hpp"
#include "gnx/dispersive.hpp"
#include "gnx/morpho.hpp"
#include "gnx/physics.hpp"

namespace gnx {

enum class Model { NSWE, GN, CoupledNSWE, CoupledGN, DecoupledGN };

std::string_view model_name(Model m) noexcept;
/// Accepts the canonical names and the CLI aliases nswe, gn, coupled, decoupled.
Model parse_model(std::string_view s);
bool is_dispersive(Model m) noexcept;
bool is_coupled(Model m) noexcept;
bool has_mobile_bed(Model m) noexcept;

struct StepControls {
    double dt = 0.0;   ///< fixed step, used when > 0
    double cfl = 0.0;  ///< adaptive step, used when > 0
    /// Minimum wet depth; unset means 1e-4 H0.
    std::optional<double> h0_min;
    /// A dry element is rewetted once its mean depth exceeds rewet_factor * h0_min.
    double rewet_factor = 2.0;
    double breaking_threshold = 1.0;
    int breaking_persistence = 10;
    bool limiter = true;
    double limiter_M = 0.0;
    double bed_limiter_M = 2.0;
    Model model = Model::GN;
    int bed_update_every = 1;
    double tau_hdg = 1.0;
    /// Elements shallower than this (mean depth) skip the dispersive correction; 0 disables.
    double dispersive_min_depth = 0.0;
    /// Elements shallower than this (mean depth) carry no bed load; 0 disables.
    double sediment_min_depth = 0.0;

    bool operator==(const StepControls&) const = default;
    void validate() const;
    double h0(double H0) const noexcept { return h0_min ? *h0_min : 1e-4 * H0; }
};

// --- time integration -------------------------------------------------------

using RhsFunction = std::function<DgField(const DgField&)>;
using StageHook = std::function<void(DgField&)>;

/// Heun / SSP two-stage step: u* = u + dt R(u); u1 = (u + u* + dt R(u*)) / 2.
/// The hook runs after each stage.
DgField rk2_step(const RhsFunction& rhs, const DgField& u, double dt, const StageHook& hook = {});

// --- limiting and positivity ------------------------------------------------

/// TVB-minmod on the linear mode of component c: the slope is kept when
/// |slope| <= M dx^2, otherwise replaced by minmod(slope, forward, backward) where the
/// differences of means are halved to match the Legendre slope. Higher modes are
/// dropped when the slope is modified. Only elements with include[e] != 0 are limited
/// and only their flagged neighbours contribute differences. Means never change.
/// Returns the number of limited elements.
std::size_t limit_component(const DgSpace& space, DgField& f, std::size_t c, double M,
                            const std::vector<std::uint8_t>& include = {});

/// Hydro: limits the free surface (h + b) and hu on wet elements, writing back h = zeta - b,
/// so that a lake at rest is untouched. Bed: limits b with its own constant.
std::size_t limit_slopes(const DgSpace& space, DgField& q, const DgField& b, double M,
                         const WetMask& mask);
std::size_t limit_bed(const DgSpace& space, DgField& b, double M, const WetMask& mask);

// --- wetting and drying -----------------------------------------------------

struct WetDryResult {
    WetMask mask;
    double mass_added = 0.0;  ///< integral of depth added by clipping (>= 0)
    std::size_t dry_count = 0;
};

/// Classifies elements (dry when the mean depth is below h0, or below rewet_factor h0 for
/// elements that were dry before), sets dry elements to constant depth max(mean, h0)
/// with zero momentum, and rescales the higher modes of wet elements so the depth stays
/// >= h0 / 2 at quadrature points and endpoints.
WetDryResult wet_dry_fix(const DgSpace& space, DgField& q, double h0, const WetMask* previous = nullptr,
                         double rewet_factor = 2.0);

// --- breaking ---------------------------------------------------------------

/// Sum of |h jumps| over inflow endpoints (u n < 0, u the mean of both traces) divided by
/// dx^((p+1)/2), the number of inflow endpoints and max |h| over the element. Only nodes
/// between two wet elements count.
double breaking_indicator(const DgSpace& space, const DgField& q, const WetMask& mask, std::size_t e);

struct BreakingState {
    std::vector<int> countdown;  ///< steps left with the dispersive term switched off
    std::optional<double> first_x;
    std::optional<double> first_t;
    std::size_t flagged_steps = 0;

    bool flagged(std::size_t e) const noexcept { return !countdown.empty() && countdown[e] > 0; }
};

/// Recomputes the indicator, flags elements (and their neighbours) above the threshold,
/// and ages existing flags. Elements shallower than dispersive_min_depth are not tested.
/// Records the first activation.
void update_breaking(const DgSpace& space, const DgField& q, const WetMask& mask,
                     const StepControls& controls, double t, BreakingState& state);

// --- step size --------------------------------------------------------------

/// cfl * min over wet elements of dx / (|u| + sqrt(g h)) at the element means.
double stable_dt(const DgSpace& space, const DgField& q, const WetMask& mask, double cfl, double g);

// --- splitting --------------------------------------------------------------

struct AuditTotals {
    double clip_mass = 0.0;            ///< total depth integral added by clipping
    double max_clip_fraction = 0.0;    ///< largest single-step clip mass / total mass
    std::size_t limited = 0;
    std::size_t dispersive_solves = 0;
};

struct SimState {
    DgField q;  ///< (h, hu)
    DgField b;  ///< bed
    double t = 0.0;
    std::size_t step = 0;
    WetMask mask;
    BreakingState breaking;
    AuditTotals audit;
    std::size_t bed_pending_steps = 0;  ///< hydro steps since the last decoupled bed update
    double bed_pending_time = 0.0;
};

struct StepContext {
    const DgSpace& space;
    const PhysicsParams& params;
    const StepControls& controls;
    const SedimentLaw& law;
};

/// Hydrodynamic (and, for coupled models, bed) operator S1 over dt.
void advance_s1(const StepContext& ctx, SimState& s, double dt);
/// Dispersive correction S2 over dt on active elements (wet, not breaking, deep enough).
void advance_s2(const StepContext& ctx, SimState& s, double dt);
/// Elements taking part in S2.
ActiveSet dispersive_active_set(const StepContext& ctx, const SimState& s);

/// S1(dt/2) S2(dt) S1(dt/2) for dispersive models, S1(dt) otherwise, then the decoupled
/// bed update when due. Advances s.t and s.step.
void strang_step(const StepContext& ctx, SimState& s, double dt);

/// Owns the space and the run state; chooses dt from the controls.
class Simulation {
public:
    Simulation(DgSpace space, DgField q0, DgField b0, PhysicsParams params, StepControls controls,
               SedimentLaw law = Grass{});

    /// One step; returns the dt used. dt_cap limits the step (e.g. to hit an output time).
    double step(double dt_cap = 0.0);
    /// Steps until t >= t_end (within round-off), calling on_step after each step.
    void run_until(double t_end, const std::function<void(const Simulation&)>& on_step = {});
    /// Replaces (h, hu) and resets every transient except the bed and the time.
    void reset_hydro(const DgField& q);

    const DgSpace& space() const noexcept { return space_; }
    const SimState& state() const noexcept { return state_; }
    SimState& state() noexcept { return state_; }
    const PhysicsParams& params() const noexcept { return params_; }
    const StepControls& controls() const noexcept { return controls_; }
    const SedimentLaw& law() const noexcept { return law_; }
    double water_mass() const;
    double bed_mass() const;

private:
    DgSpace space_;
    PhysicsParams params_;
    StepControls controls_;
    SedimentLaw law_;
    SimState state_;
};

}  // namespace gnx
