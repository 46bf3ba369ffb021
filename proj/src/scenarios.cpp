#include "gnx/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnx {

double SolitonParams::kappa() const noexcept {
    return std::sqrt(3.0 * a0) / (2.0 * H0 * std::sqrt(H0 + a0));
}

double SolitonParams::c0() const noexcept { return std::sqrt(g * (H0 + a0)); }

void SolitonParams::validate() const {
    if (!(H0 > 0.0) || !(a0 > 0.0) || !(g > 0.0))
        throw std::invalid_argument("soliton: H0, a0 and g must be positive");
    if (!std::isfinite(x0)) throw std::invalid_argument("soliton: x0 must be finite");
}

HydroState soliton_state(const SolitonParams& p, double x, double t) {
    const double c0 = p.c0();
    const double s = 1.0 / std::cosh(p.kappa() * (x - p.x0 - c0 * t));
    const double h = p.H0 + p.a0 * s * s;
    return {h, c0 * (h - p.H0)};
}

double dingemans_bar_elevation(double x) {
    if (x > 6.0 && x < 12.0) return -0.4 + (x - 6.0) / 20.0;
    if (x >= 12.0 && x < 14.0) return -0.1;
    if (x >= 14.0 && x < 17.0) return -0.1 - (x - 14.0) / 10.0;
    return -0.4;
}

void ScenarioConfig::validate() const {
    std::string err;
    auto fail = [&](const std::string& m) { err += "\n  " + m; };
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end())
        fail("unknown scenario '" + scenario + "'");
    if (!(x_max > x_min)) fail("mesh: x_max must exceed x_min");
    if (elements < 1) fail("mesh: elements must be >= 1");
    if (order < 0 || order > 6) fail("mesh: order must lie in [0, 6]");
    try { physics.validate(); } catch (const std::exception& e) { fail(std::string("physics: ") + e.what()); }
    try { controls.validate(); } catch (const std::exception& e) { fail(e.what()); }
    if (!(a0 > 0.0) && (scenario == "soliton_flat" || scenario == "soliton_slope" || scenario == "sumer_beach"))
        fail("wave: a0 must be > 0");
    if (wave_amplitude < 0.0) fail("wave: amplitude must be >= 0");
    if (wave_amplitude > 0.0 && !(wave_period > 0.0)) fail("wave: period must be > 0 with a wavemaker");
    if (ramp_periods < 0.0) fail("wave: ramp_periods must be >= 0");
    if (!(sediment_A >= 0.0)) fail("sediment: A must be >= 0");
    if (!(sediment_m >= 1.0 && sediment_m <= 3.0)) fail("sediment: m must lie in [1, 3]");
    for (double x : gauges)
        if (!(x >= x_min && x <= x_max)) fail("gauge at x = " + std::to_string(x) + " lies outside the domain");
    if (!(end_time > 0.0)) fail("run: end_time must be > 0");
    if (waves < 1) fail("run: waves must be >= 1");
    if (output_every < 1) fail("output: every must be >= 1");
    if (bed_every < 0) fail("output: bed_every must be >= 0");
    if (out_dir.empty()) fail("output: dir must not be empty");
    if (!err.empty()) throw std::invalid_argument("invalid configuration:" + err);
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"soliton_flat", "soliton_slope", "dingemans_bar",
                                                "sumer_beach", "lake_at_rest"};
    return names;
}

std::string scenario_description(const std::string& name) {
    if (name == "soliton_flat") return "solitary wave over a flat bottom, exact solution available";
    if (name == "soliton_slope") return "solitary wave shoaling on a 1:50 slope and reflecting off a wall";
    if (name == "dingemans_bar") return "regular waves from a wavemaker over a submerged trapezoidal bar";
    if (name == "sumer_beach") return "solitary waves breaking and running up a 1:14 beach, optional mobile bed";
    if (name == "lake_at_rest") return "still water over the trapezoidal bar (well-balance check)";
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

ScenarioConfig default_config(const std::string& name) {
    ScenarioConfig c;
    c.scenario = name;
    c.physics.g = 9.81;
    c.physics.alpha = 1.0;
    if (name == "soliton_flat") {
        c.x_min = 0.0;
        c.x_max = 20.0;
        c.elements = 400;
        c.physics.H0 = 0.5;
        c.a0 = 0.1;
        c.x0 = 5.0;
        c.controls.dt = 1e-4;
        c.controls.limiter = false;
        c.end_time = 4.0;
        c.gauges = {10.0, 15.0};
        c.output_every = 100;
    } else if (name == "soliton_slope") {
        c.x_min = -20.0;
        c.x_max = 20.0;
        c.elements = 160;
        c.physics.H0 = 0.7;
        c.a0 = 0.12;
        c.x0 = -10.0;
        c.controls.dt = 1e-3;
        c.controls.limiter = false;
        c.end_time = 20.0;
        c.gauges = {17.75};
        c.output_every = 10;
    } else if (name == "dingemans_bar") {
        c.x_min = 0.0;
        c.x_max = 30.0;
        c.elements = 600;
        c.physics.H0 = 0.4;
        c.wave_amplitude = 0.01;
        c.wave_period = 2.2;
        c.ramp_periods = 2.0;
        c.controls.dt = 5e-3;
        c.controls.limiter = false;
        c.end_time = 40.0;
        c.gauges = {10.5, 13.5, 15.7, 17.3, 19.0};
        c.output_every = 2;
    } else if (name == "sumer_beach") {
        c.x_min = -10.0;
        c.x_max = 10.0;
        c.elements = 400;
        c.physics.H0 = 0.4;
        c.physics.cf = 0.012;
        c.physics.friction_on = true;
        c.a0 = 0.071;
        c.x0 = -5.0;
        c.controls.dt = 5e-3;
        c.controls.limiter = true;
        c.controls.h0_min = 1e-3;
        c.controls.dispersive_min_depth = 0.02;
        c.controls.sediment_min_depth = 0.05;
        c.sediment_A = 4.75e-3;
        c.sediment_m = 3.0;
        c.end_time = 150.0;
        c.gauges = {0.0, 4.63, 4.69, 4.87, 5.11, 5.35, 5.59, 5.65, 5.85};
        c.output_every = 4;
        c.bed_every = 0;
    } else if (name == "lake_at_rest") {
        c.x_min = 0.0;
        c.x_max = 30.0;
        c.elements = 600;
        c.physics.H0 = 0.4;
        c.controls.model = Model::DecoupledGN;
        c.controls.dt = 5e-3;
        c.controls.limiter = true;
        c.sediment_A = 4.75e-3;
        c.end_time = 5.0;
        c.gauges = {10.5, 13.5, 15.7};
        c.output_every = 10;
    } else {
        throw std::invalid_argument("unknown scenario '" + name + "'");
    }
    return c;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    BoundaryKind left = Reflecting{};
    if (cfg.wave_amplitude > 0.0) left = Wavemaker::periodic(cfg.wave_amplitude, cfg.wave_period, cfg.ramp_periods);
    Mesh1D mesh = build_uniform_mesh(cfg.x_min, cfg.x_max, cfg.elements, {left, Reflecting{}});
    DgSpace space(std::move(mesh), cfg.order);

    const double H0 = cfg.physics.H0;
    const SolitonParams sp{H0, cfg.a0, cfg.x0, cfg.physics.g};
    std::function<double(double)> bed = [](double) { return 0.0; };
    std::function<HydroState(double)> init;
    std::function<HydroState(double, double)> exact;

    const std::string& n = cfg.scenario;
    if (n == "soliton_flat") {
        init = [sp](double x) { return soliton_state(sp, x, 0.0); };
        exact = [sp](double x, double t) { return soliton_state(sp, x, t); };
    } else if (n == "soliton_slope" || n == "sumer_beach") {
        const double rate = n == "soliton_slope" ? 50.0 : 14.0;
        bed = [rate](double x) { return std::max(0.0, x / rate); };
        init = [sp, bed](double x) {
            const HydroState s = soliton_state(sp, x, 0.0);
            const double h = s.h - bed(x);
            return h > 0.0 ? HydroState{h, s.hu} : HydroState{0.0, 0.0};
        };
    } else {
        bed = [H0](double x) { return dingemans_bar_elevation(x) + H0; };
        init = [H0, bed](double x) { return HydroState{H0 - bed(x), 0.0}; };
    }

    DgField b0 = project(bed, space);
    DgField q0 = project(std::vector<PointFunction>{[init](double x) { return init(x).h; },
                                                    [init](double x) { return init(x).hu; }},
                         space);
    if (n == "dingemans_bar" || n == "lake_at_rest") {
        // still water: depth from the projected bed so that zeta vanishes exactly
        for (std::size_t e = 0; e < space.n_elements(); ++e)
            for (std::size_t k = 0; k < space.n_modes(); ++k) q0(e, 0, k) = (k == 0 ? H0 : 0.0) - b0(e, 0, k);
    }
    return Scenario{cfg, std::move(space), std::move(q0), std::move(b0), std::move(exact)};
}

std::vector<GaugeRecord> make_gauges(const DgSpace& space, const std::vector<double>& xs) {
    std::vector<GaugeRecord> out;
    for (double x : xs) {
        if (!(x >= space.mesh().x_min() && x <= space.mesh().x_max()))
            throw std::out_of_range("gauge at x = " + std::to_string(x) + " lies outside the domain");
        out.push_back(GaugeRecord{x, {}});
    }
    return out;
}

void record_gauges(const DgSpace& space, const DgField& q, const DgField& b, double H0,
                   std::vector<GaugeRecord>& gauges, double t) {
    for (auto& g : gauges) {
        if (!g.samples.empty() && !(t > g.samples.back()[0])) continue;
        const double h = eval_x(q, space, g.x, 0);
        const double hu = eval_x(q, space, g.x, 1);
        const double bb = eval_x(b, space, g.x, 0);
        const double u = h > 0.0 ? hu / h : 0.0;
        g.samples.push_back({t, h + bb - H0, h, u, bb});
    }
}

ErrorNorms error_norms(const DgSpace& space, const DgField& f, std::size_t c,
                       const std::function<double(double)>& ref) {
    const auto& quad = space.quadrature();
    std::vector<double> v;
    space.eval_at_qp(f, c, v);
    ErrorNorms out;
    double sq = 0.0;
    for (std::size_t e = 0; e < space.n_elements(); ++e)
        for (std::size_t i = 0; i < space.n_qp(); ++i) {
            const double d = v[e * space.n_qp() + i] - ref(space.qp_x(e, i));
            sq += quad.weights[i] * space.jacobian(e) * d * d;
            out.linf = std::max(out.linf, std::abs(d));
        }
    out.l2 = std::sqrt(sq);
    return out;
}

SolitonError soliton_error(const DgSpace& space, const DgField& q, const SolitonParams& p, double t) {
    auto zeta_exact = [&](double x) { return soliton_state(p, x, t).h - p.H0; };
    const ErrorNorms err = error_norms(space, q, 0, [&](double x) { return soliton_state(p, x, t).h; });
    const DgField zero = space.make_field(1);
    const ErrorNorms ref = error_norms(space, zero, 0, zeta_exact);

    SolitonError out;
    out.l2_relative = err.l2 / ref.l2;
    // peak over a fine sampling of each element
    double peak = -1e300;
    const int samples = 16;
    for (std::size_t e = 0; e < space.n_elements(); ++e)
        for (int s = 0; s <= samples; ++s) {
            const double xi = -1.0 + 2.0 * s / samples;
            const double z = eval_at(q, space, e, xi, 0) - p.H0;
            if (z > peak) {
                peak = z;
                out.peak_x = space.mesh().to_physical(e, xi);
            }
        }
    out.peak_relative = std::abs(peak - p.a0) / p.a0;
    return out;
}

}  // namespace gnx
