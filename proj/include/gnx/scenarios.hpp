#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gnx/dgcore.hpp"
#include "gnx/mesh1d.hpp"
#include "gnx/morpho.hpp"
#include "gnx/physics.hpp"
#include "gnx/stepper.hpp"

namespace gnx {

struct SolitonParams {
    double H0 = 0.5;
    double a0 = 0.1;
    double x0 = 5.0;
    double g = 9.81;

    double kappa() const noexcept;
    double c0() const noexcept;
    void validate() const;
};

/// h = H0 + a0 sech^2(kappa (x - x0 - c0 t)), hu = c0 (h - H0).
HydroState soliton_state(const SolitonParams& p, double x, double t);

/// Trapezoidal bar of the Dingemans flume as elevation relative to still water (-0.4 offshore).
double dingemans_bar_elevation(double x);

/// Everything needed to set up and run one simulation.
struct ScenarioConfig {
    std::string scenario = "soliton_flat";

    double x_min = 0.0;
    double x_max = 20.0;
    std::size_t elements = 400;
    int order = 1;

    PhysicsParams physics{};
    StepControls controls{};  ///< includes the model variant

    // solitary wave initial condition
    double a0 = 0.1;
    double x0 = 5.0;
    // wavemaker on the left end (amplitude 0 means a wall)
    double wave_amplitude = 0.0;
    double wave_period = 0.0;
    double ramp_periods = 2.0;

    // Grass law
    double sediment_A = 0.0;
    double sediment_m = 3.0;

    std::vector<double> gauges;
    double end_time = 4.0;  ///< per wave
    int waves = 1;          ///< repeated runs with the hydrodynamics reset and the bed kept
    std::string out_dir = "out";
    int output_every = 1;   ///< gauge sampling cadence in steps
    int bed_every = 0;      ///< bed snapshot cadence in steps (0: first and last only)
    std::uint64_t seed = 0;

    bool operator==(const ScenarioConfig&) const = default;
    /// Throws std::invalid_argument listing every violation.
    void validate() const;
    SedimentLaw law() const { return Grass{sediment_A, sediment_m}; }
};

/// Names of the built-in scenarios, in listing order.
const std::vector<std::string>& scenario_names();
/// One-line description of a built-in scenario.
std::string scenario_description(const std::string& name);
/// Defaults of a built-in scenario; throws std::invalid_argument for unknown names.
ScenarioConfig default_config(const std::string& name);

struct Scenario {
    ScenarioConfig config;
    DgSpace space;
    DgField q0;  ///< (h, hu) before the wet/dry fix
    DgField b0;
    /// Exact (h, hu) when one is known (flat-bed soliton).
    std::function<HydroState(double x, double t)> exact;
};

Scenario build_scenario(const ScenarioConfig& config);

struct GaugeRecord {
    double x = 0.0;
    std::vector<std::array<double, 5>> samples;  ///< t, zeta, h, u, b
};

std::vector<GaugeRecord> make_gauges(const DgSpace& space, const std::vector<double>& xs);
/// Appends one sample per gauge; skips samples whose time does not increase.
void record_gauges(const DgSpace& space, const DgField& q, const DgField& b, double H0,
                   std::vector<GaugeRecord>& gauges, double t);

struct ErrorNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Norms of component c of f minus ref over the mesh, sampled at quadrature points.
ErrorNorms error_norms(const DgSpace& space, const DgField& f, std::size_t c,
                       const std::function<double(double)>& ref);

struct SolitonError {
    double l2_relative = 0.0;    ///< ||zeta - zeta_exact|| / ||zeta_exact||
    double peak_relative = 0.0;  ///< |max zeta - a0| / a0
    double peak_x = 0.0;
};

/// Free-surface error against the exact soliton at time t (flat bed).
SolitonError soliton_error(const DgSpace& space, const DgField& q, const SolitonParams& p, double t);

}  // namespace gnx
