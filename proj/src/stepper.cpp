#include "gnx/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gnx/coupled_solver.hpp"
#include "gnx/kernels.hpp"
#include "gnx/swe_solver.hpp"

namespace gnx {

std::string_view model_name(Model m) noexcept {
    switch (m) {
        case Model::NSWE: return "NSWE";
        case Model::GN: return "GN";
        case Model::CoupledNSWE: return "CoupledNSWE";
        case Model::CoupledGN: return "CoupledGN";
        case Model::DecoupledGN: return "DecoupledGN";
    }
    return "?";
}

Model parse_model(std::string_view s) {
    if (s == "NSWE" || s == "nswe") return Model::NSWE;
    if (s == "GN" || s == "gn") return Model::GN;
    if (s == "CoupledNSWE" || s == "coupled_nswe") return Model::CoupledNSWE;
    if (s == "CoupledGN" || s == "coupled") return Model::CoupledGN;
    if (s == "DecoupledGN" || s == "decoupled") return Model::DecoupledGN;
    throw std::invalid_argument("unknown model '" + std::string(s) + "'");
}

bool is_dispersive(Model m) noexcept {
    return m == Model::GN || m == Model::CoupledGN || m == Model::DecoupledGN;
}
bool is_coupled(Model m) noexcept { return m == Model::CoupledNSWE || m == Model::CoupledGN; }
bool has_mobile_bed(Model m) noexcept { return is_coupled(m) || m == Model::DecoupledGN; }

void StepControls::validate() const {
    std::string err;
    if (dt > 0.0 && cfl > 0.0) err += "dt and cfl are mutually exclusive; ";
    if (!(dt > 0.0) && !(cfl > 0.0 && cfl <= 1.0)) err += "need dt > 0 or 0 < cfl <= 1; ";
    if (dt < 0.0 || cfl < 0.0 || cfl > 1.0) err += "dt must be > 0 and cfl in (0, 1]; ";
    if (h0_min && !(*h0_min > 0.0)) err += "h0_min must be > 0; ";
    if (!(rewet_factor >= 1.0)) err += "rewet_factor must be >= 1; ";
    if (!(breaking_threshold > 0.0)) err += "breaking_threshold must be > 0; ";
    if (breaking_persistence < 0) err += "breaking_persistence must be >= 0; ";
    if (!(limiter_M >= 0.0) || !(bed_limiter_M >= 0.0)) err += "limiter constants must be >= 0; ";
    if (bed_update_every < 1) err += "bed_update_every must be >= 1; ";
    if (!(tau_hdg > 0.0)) err += "tau_hdg must be > 0; ";
    if (!(dispersive_min_depth >= 0.0)) err += "dispersive_min_depth must be >= 0; ";
    if (!(sediment_min_depth >= 0.0)) err += "sediment_min_depth must be >= 0; ";
    if (!err.empty()) throw std::invalid_argument("step controls: " + err.substr(0, err.size() - 2));
}

DgField rk2_step(const RhsFunction& rhs, const DgField& u, double dt, const StageHook& hook) {
    DgField r = rhs(u);
    DgField u1(u);
    kernels::axpby(1.0, u.data(), dt, r.data(), u1.data());
    if (hook) hook(u1);
    r = rhs(u1);
    DgField tmp(u1);
    kernels::axpby(1.0, u1.data(), dt, r.data(), tmp.data());
    DgField u2(u);
    kernels::axpby(0.5, u.data(), 0.5, tmp.data(), u2.data());
    if (hook) hook(u2);
    return u2;
}

namespace {

double minmod3(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
    if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
    return 0.0;
}

double minmod2(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

// New linear coefficient, or nullopt when the element keeps its slope.
std::optional<double> limited_slope(const DgSpace& space, const std::vector<double>& mean,
                                    const std::vector<double>& slope,
                                    const std::vector<std::uint8_t>& include, std::size_t e,
                                    double M) {
    const std::size_t ne = space.n_elements();
    const double dx = space.mesh().length(e);
    const double c1 = slope[e];
    if (std::abs(c1) <= M * dx * dx) return std::nullopt;
    const bool has_l = e > 0 && (include.empty() || include[e - 1]);
    const bool has_r = e + 1 < ne && (include.empty() || include[e + 1]);
    if (!has_l && !has_r) return std::nullopt;
    double v;
    if (has_l && has_r)
        v = minmod3(c1, 0.5 * (mean[e + 1] - mean[e]), 0.5 * (mean[e] - mean[e - 1]));
    else if (has_r)
        v = minmod2(c1, 0.5 * (mean[e + 1] - mean[e]));
    else
        v = minmod2(c1, 0.5 * (mean[e] - mean[e - 1]));
    if (v == c1) return std::nullopt;
    return v;
}

}  // namespace

std::size_t limit_component(const DgSpace& space, DgField& f, std::size_t c, double M,
                            const std::vector<std::uint8_t>& include) {
    const std::size_t ne = space.n_elements(), nm = space.n_modes();
    if (nm < 2) return 0;
    std::vector<double> mean(ne), slope(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        mean[e] = f(e, c, 0);
        slope[e] = f(e, c, 1);
    }
    std::size_t count = 0;
    for (std::size_t e = 0; e < ne; ++e) {
        if (!include.empty() && !include[e]) continue;
        const auto v = limited_slope(space, mean, slope, include, e, M);
        if (!v) continue;
        f(e, c, 1) = *v;
        for (std::size_t k = 2; k < nm; ++k) f(e, c, k) = 0.0;
        ++count;
    }
    return count;
}

std::size_t limit_slopes(const DgSpace& space, DgField& q, const DgField& b, double M,
                         const WetMask& mask) {
    const std::size_t ne = space.n_elements(), nm = space.n_modes();
    if (nm < 2) return 0;
    std::vector<std::uint8_t> include(ne, 1);
    for (std::size_t e = 0; e < ne; ++e) include[e] = mask.is_wet(e) ? 1 : 0;

    std::vector<double> mean(ne), slope(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        mean[e] = q(e, 0, 0) + b(e, 0, 0);
        slope[e] = q(e, 0, 1) + b(e, 0, 1);
    }
    std::size_t count = 0;
    for (std::size_t e = 0; e < ne; ++e) {
        if (!include[e]) continue;
        const auto v = limited_slope(space, mean, slope, include, e, M);
        if (!v) continue;
        q(e, 0, 1) = *v - b(e, 0, 1);
        for (std::size_t k = 2; k < nm; ++k) q(e, 0, k) = -b(e, 0, k);
        ++count;
    }
    return count + limit_component(space, q, 1, M, include);
}

std::size_t limit_bed(const DgSpace& space, DgField& b, double M, const WetMask& mask) {
    std::vector<std::uint8_t> include(space.n_elements());
    for (std::size_t e = 0; e < include.size(); ++e) include[e] = mask.is_wet(e) ? 1 : 0;
    return limit_component(space, b, 0, M, include);
}

WetDryResult wet_dry_fix(const DgSpace& space, DgField& q, double h0, const WetMask* previous,
                         double rewet_factor) {
    if (!(h0 > 0.0)) throw std::invalid_argument("wet_dry_fix: h0 must be positive");
    const std::size_t ne = space.n_elements(), nm = space.n_modes(), nq = space.n_qp();
    WetDryResult res;
    res.mask.h0 = h0;
    res.mask.wet.assign(ne, 1);
    const double floor = 0.5 * h0;
    for (std::size_t e = 0; e < ne; ++e) {
        const double mean = q(e, 0, 0);
        const bool was_dry = previous && !previous->wet.empty() && !previous->is_wet(e);
        const double threshold = was_dry ? rewet_factor * h0 : h0;
        if (!(mean >= threshold)) {
            const double target = std::max(mean, h0);
            res.mass_added += (target - mean) * space.mesh().length(e);
            q(e, 0, 0) = target;
            for (std::size_t k = 1; k < nm; ++k) q(e, 0, k) = 0.0;
            for (std::size_t k = 0; k < nm; ++k) q(e, 1, k) = 0.0;
            res.mask.wet[e] = 0;
            ++res.dry_count;
            continue;
        }
        double lo = std::min(space.left_trace(q, e, 0), space.right_trace(q, e, 0));
        for (std::size_t i = 0; i < nq; ++i) {
            double v = 0.0;
            for (std::size_t k = 0; k < nm; ++k) v += q(e, 0, k) * space.phi(i, k);
            lo = std::min(lo, v);
        }
        if (lo < floor) {
            const double theta = (mean - floor) / (mean - lo);
            for (std::size_t k = 1; k < nm; ++k) q(e, 0, k) *= theta;
        }
    }
    return res;
}

double breaking_indicator(const DgSpace& space, const DgField& q, const WetMask& mask, std::size_t e) {
    const std::size_t ne = space.n_elements();
    if (!mask.is_wet(e)) return 0.0;
    double sum = 0.0;
    int inflow = 0;
    auto side = [&](std::size_t nb, double h_in, double hu_in, double h_out, double hu_out, double n) {
        if (!mask.is_wet(nb) || !(h_in > 0.0) || !(h_out > 0.0)) return;
        const double u = 0.5 * (hu_in / h_in + hu_out / h_out);
        if (u * n < 0.0) {
            sum += std::abs(h_in - h_out);
            ++inflow;
        }
    };
    if (e > 0)
        side(e - 1, space.left_trace(q, e, 0), space.left_trace(q, e, 1),
             space.right_trace(q, e - 1, 0), space.right_trace(q, e - 1, 1), -1.0);
    if (e + 1 < ne)
        side(e + 1, space.right_trace(q, e, 0), space.right_trace(q, e, 1),
             space.left_trace(q, e + 1, 0), space.left_trace(q, e + 1, 1), +1.0);
    if (inflow == 0) return 0.0;

    double hmax = std::max(std::abs(space.left_trace(q, e, 0)), std::abs(space.right_trace(q, e, 0)));
    for (std::size_t i = 0; i < space.n_qp(); ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < space.n_modes(); ++k) v += q(e, 0, k) * space.phi(i, k);
        hmax = std::max(hmax, std::abs(v));
    }
    const double dx = space.mesh().length(e);
    const double scale = std::pow(dx, 0.5 * (space.order() + 1));
    return sum / (scale * inflow * hmax);
}

void update_breaking(const DgSpace& space, const DgField& q, const WetMask& mask,
                     const StepControls& controls, double t, BreakingState& state) {
    const std::size_t ne = space.n_elements();
    state.countdown.resize(ne, 0);
    std::vector<double> ind(ne, 0.0);
    std::vector<std::uint8_t> trig(ne, 0);
    bool any = false;
    std::size_t worst = 0;
    for (std::size_t e = 0; e < ne; ++e) {
        // elements too shallow for the dispersive step have nothing to switch off
        if (q(e, 0, 0) < controls.dispersive_min_depth) continue;
        ind[e] = breaking_indicator(space, q, mask, e);
        if (ind[e] > controls.breaking_threshold) {
            trig[e] = 1;
            if (!any || ind[e] > ind[worst]) worst = e;
            any = true;
        }
    }
    for (std::size_t e = 0; e < ne; ++e) {
        const bool hit = trig[e] || (e > 0 && trig[e - 1]) || (e + 1 < ne && trig[e + 1]);
        if (hit) state.countdown[e] = std::max(1, controls.breaking_persistence);
        else if (state.countdown[e] > 0) --state.countdown[e];
    }
    if (any) {
        ++state.flagged_steps;
        if (!state.first_x) {
            state.first_x = space.mesh().center(worst);
            state.first_t = t;
        }
    }
}

double stable_dt(const DgSpace& space, const DgField& q, const WetMask& mask, double cfl, double g) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("stable_dt: cfl must lie in (0, 1]");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < space.n_elements(); ++e) {
        if (!mask.is_wet(e)) continue;
        const HydroState m{q(e, 0, 0), q(e, 1, 0)};
        require_wet(m, "stable_dt");
        best = std::min(best, space.mesh().length(e) / lambda_max(m, 1.0, g));
    }
    if (!std::isfinite(best)) throw std::domain_error("stable_dt: no wet element");
    return cfl * best;
}

namespace {

DgField stack(const DgField& q, const DgField& b) {
    DgField p(q.n_elements(), 3, q.order());
    p.set_component(0, q.component(0));
    p.set_component(1, q.component(1));
    p.set_component(2, b);
    return p;
}

void unstack(const DgField& p, DgField& q, DgField& b) {
    q.set_component(0, p.component(0));
    q.set_component(1, p.component(1));
    b = p.component(2);
}

}  // namespace

void advance_s1(const StepContext& ctx, SimState& s, double dt) {
    const double h0 = ctx.controls.h0(ctx.params.H0);
    const double total = std::max(integrate(s.q, ctx.space, 0), 1e-300);
    double stage_t = s.t;
    double clipped = 0.0;
    const bool mobile = !is_rigid(ctx.law);

    auto fix_hydro = [&](DgField& q, const DgField& b) {
        WetDryResult wd = wet_dry_fix(ctx.space, q, h0, &s.mask, ctx.controls.rewet_factor);
        clipped += wd.mass_added;
        s.mask = std::move(wd.mask);
        if (!ctx.controls.limiter) return;
        s.audit.limited += limit_slopes(ctx.space, q, b, ctx.controls.limiter_M, s.mask);
        // the limited surface slope may undercut the positivity scaling near the shoreline
        wd = wet_dry_fix(ctx.space, q, h0, &s.mask, ctx.controls.rewet_factor);
        clipped += wd.mass_added;
        s.mask = std::move(wd.mask);
    };

    if (is_coupled(ctx.controls.model)) {
        DgField p = stack(s.q, s.b);
        auto rhs = [&](const DgField& x) {
            return coupled_rhs(ctx.space, x, ctx.params, ctx.law, s.mask, stage_t,
                               ctx.controls.sediment_min_depth);
        };
        auto hook = [&](DgField& x) {
            DgField q(s.q), b;
            unstack(x, q, b);
            if (ctx.controls.limiter && mobile)
                s.audit.limited += limit_bed(ctx.space, b, ctx.controls.bed_limiter_M, s.mask);
            fix_hydro(q, b);
            x = stack(q, b);
            stage_t = s.t + dt;
        };
        p = rk2_step(rhs, p, dt, hook);
        unstack(p, s.q, s.b);
    } else {
        auto rhs = [&](const DgField& x) {
            return nswe_rhs(ctx.space, x, s.b, ctx.params, s.mask, stage_t);
        };
        auto hook = [&](DgField& x) {
            fix_hydro(x, s.b);
            stage_t = s.t + dt;
        };
        s.q = rk2_step(rhs, s.q, dt, hook);
    }
    s.audit.clip_mass += clipped;
    s.audit.max_clip_fraction = std::max(s.audit.max_clip_fraction, clipped / total);
}

ActiveSet dispersive_active_set(const StepContext& ctx, const SimState& s) {
    const std::size_t ne = ctx.space.n_elements();
    ActiveSet active(ne, 0);
    for (std::size_t e = 0; e < ne; ++e)
        active[e] = s.mask.is_wet(e) && !s.breaking.flagged(e) &&
                    s.q(e, 0, 0) >= ctx.controls.dispersive_min_depth;
    return active;
}

void advance_s2(const StepContext& ctx, SimState& s, double dt) {
    const ActiveSet active = dispersive_active_set(ctx, s);
    if (std::none_of(active.begin(), active.end(), [](std::uint8_t a) { return a != 0; })) return;
    // h is constant during S2, so one factorization serves both stages
    const DispersiveOperator op(ctx.space, s.q.component(0), s.b, ctx.params, ctx.controls.tau_hdg,
                                active);
    auto rhs = [&](const DgField& x) {
        const DgField src = compute_source_s(ctx.space, x, s.b, ctx.params);
        const DispersiveSolution sol = op.solve(src);
        ++s.audit.dispersive_solves;
        return dispersive_rhs(ctx.space, x, sol.w1, s.b, ctx.params, active);
    };
    s.q = rk2_step(rhs, s.q, dt);
}

void strang_step(const StepContext& ctx, SimState& s, double dt) {
    const double t0 = s.t;
    if (is_dispersive(ctx.controls.model)) {
        advance_s1(ctx, s, 0.5 * dt);
        s.t = t0 + 0.5 * dt;
        update_breaking(ctx.space, s.q, s.mask, ctx.controls, s.t, s.breaking);
        advance_s2(ctx, s, dt);
        advance_s1(ctx, s, 0.5 * dt);
    } else {
        advance_s1(ctx, s, dt);
    }
    s.t = t0 + dt;
    ++s.step;

    if (ctx.controls.model == Model::DecoupledGN && !is_rigid(ctx.law)) {
        ++s.bed_pending_steps;
        s.bed_pending_time += dt;
        if (s.bed_pending_steps >= static_cast<std::size_t>(ctx.controls.bed_update_every)) {
            const DgField db = exner_rhs(ctx.space, s.q, s.b, ctx.law,
                                         sediment_mask(s.q, s.mask, ctx.controls.sediment_min_depth));
            kernels::axpby(1.0, s.b.data(), s.bed_pending_time, db.data(), s.b.data());
            if (ctx.controls.limiter)
                s.audit.limited += limit_bed(ctx.space, s.b, ctx.controls.bed_limiter_M, s.mask);
            s.bed_pending_steps = 0;
            s.bed_pending_time = 0.0;
        }
    }
}

Simulation::Simulation(DgSpace space, DgField q0, DgField b0, PhysicsParams params,
                       StepControls controls, SedimentLaw law)
    : space_(std::move(space)), params_(params), controls_(std::move(controls)), law_(std::move(law)) {
    params_.validate();
    controls_.validate();
    validate(law_);
    const std::size_t ne = space_.n_elements();
    if (q0.n_elements() != ne || q0.n_components() != 2 || b0.n_elements() != ne ||
        b0.n_components() != 1 || q0.n_modes() != space_.n_modes() || b0.n_modes() != space_.n_modes())
        throw std::invalid_argument("Simulation: initial fields do not match the space");
    state_.q = std::move(q0);
    state_.b = std::move(b0);
    state_.breaking.countdown.assign(ne, 0);
    reset_hydro(state_.q);
}

void Simulation::reset_hydro(const DgField& q) {
    state_.q = q;
    WetDryResult wd = wet_dry_fix(space_, state_.q, controls_.h0(params_.H0));
    state_.mask = std::move(wd.mask);
    state_.breaking.countdown.assign(space_.n_elements(), 0);
    state_.bed_pending_steps = 0;
    state_.bed_pending_time = 0.0;
}

double Simulation::step(double dt_cap) {
    double dt = controls_.dt > 0.0 ? controls_.dt
                                   : stable_dt(space_, state_.q, state_.mask, controls_.cfl, params_.g);
    if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
    strang_step(StepContext{space_, params_, controls_, law_}, state_, dt);
    if (!state_.q.all_finite() || !state_.b.all_finite())
        throw std::runtime_error("solution became non-finite at t = " + std::to_string(state_.t));
    return dt;
}

void Simulation::run_until(double t_end, const std::function<void(const Simulation&)>& on_step) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t_end));
    while (t_end - state_.t > tol) {
        step(t_end - state_.t);
        if (on_step) on_step(*this);
    }
}

double Simulation::water_mass() const { return integrate(state_.q, space_, 0); }
double Simulation::bed_mass() const { return integrate(state_.b, space_, 0); }

}  // namespace gnx
