#include "gnx/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gnx/cli_io.hpp"
#include "gnx/coupled_solver.hpp"
#include "gnx/dispersive.hpp"
#include "gnx/kernels.hpp"
#include "gnx/morpho.hpp"
#include "gnx/scenarios.hpp"
#include "gnx/stepper.hpp"
#include "gnx/swe_solver.hpp"

namespace gnx {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

InvariantResult bound(std::string module, std::string name, double value, double limit) {
    const bool ok = std::isfinite(value) && value <= limit;
    return {std::move(module), std::move(name), ok, sci(value) + " <= " + sci(limit)};
}

DgSpace walled_space(double a, double b, std::size_t n, int order = 1) {
    return DgSpace(build_uniform_mesh(a, b, n, {Reflecting{}, Reflecting{}}), order);
}

// Smooth, deep, moving state over a smooth bump.
void smooth_state(const DgSpace& space, DgField& q, DgField& b) {
    b = project([](double x) { return 0.1 * std::exp(-0.5 * (x - 4.0) * (x - 4.0)); }, space);
    q = project(std::vector<PointFunction>{
                    [](double x) { return 0.8 + 0.05 * std::sin(0.7 * x); },
                    [](double x) { return 0.1 * std::cos(0.5 * x) + 0.02 * std::sin(1.3 * x); }},
                space);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

std::vector<InvariantCheck> invariant_suite(std::uint64_t seed) {
    std::vector<InvariantCheck> c;

    // --- mesh1d ---------------------------------------------------------------
    c.push_back({"mesh1d", "element lengths sum to the domain length", [seed] {
        Rng rng(seed);
        std::vector<double> nodes{-3.0};
        for (int i = 0; i < 137; ++i) nodes.push_back(nodes.back() + uniform(rng, 0.01, 0.3));
        const Mesh1D mesh(nodes, Reflecting{}, Reflecting{});
        double sum = 0.0;
        for (std::size_t e = 0; e < mesh.n_elements(); ++e) sum += mesh.length(e);
        const double span = mesh.x_max() - mesh.x_min();
        return bound("mesh1d", "element lengths sum to the domain length", std::abs(sum - span) / span, 1e-14);
    }});
    c.push_back({"mesh1d", "skeleton size is n_elements - 1", [] {
        bool ok = true;
        for (std::size_t n : {1u, 2u, 17u, 400u}) {
            const Mesh1D m = build_uniform_mesh(0.0, 1.0, n, {Reflecting{}, Reflecting{}});
            ok = ok && m.skeleton().size() == n - 1;
        }
        return InvariantResult{"mesh1d", "skeleton size is n_elements - 1", ok, "n = 1, 2, 17, 400"};
    }});

    // --- dgcore ---------------------------------------------------------------
    c.push_back({"dgcore", "projection reproduces polynomials of degree <= p", [seed] {
        Rng rng(seed + 1);
        double worst = 0.0;
        for (int p = 0; p <= 4; ++p) {
            const DgSpace space(build_uniform_mesh(-1.0, 2.0, 7, {Reflecting{}, Reflecting{}}), p);
            std::vector<double> coef(static_cast<std::size_t>(p) + 1);
            for (double& a : coef) a = uniform(rng, -1.0, 1.0);
            auto poly = [&](double x) {
                double v = 0.0;
                for (std::size_t k = coef.size(); k-- > 0;) v = v * x + coef[k];
                return v;
            };
            const DgField f = project(poly, space);
            for (int i = 0; i < 50; ++i) {
                const double x = uniform(rng, -1.0, 2.0);
                worst = std::max(worst, std::abs(eval_x(f, space, x) - poly(x)));
            }
        }
        return bound("dgcore", "projection reproduces polynomials of degree <= p", worst, 1e-12);
    }});
    c.push_back({"dgcore", "weak derivative is linear", [seed] {
        Rng rng(seed + 2);
        const DgSpace space = walled_space(0.0, 3.0, 25, 2);
        DgField f = space.make_field(1), g = space.make_field(1), h = space.make_field(1);
        for (double& v : f.data()) v = uniform(rng, -1.0, 1.0);
        for (double& v : g.data()) v = uniform(rng, -1.0, 1.0);
        const double a = 1.7, b = -0.3;
        for (std::size_t i = 0; i < h.data().size(); ++i) h.data()[i] = a * f.data()[i] + b * g.data()[i];
        const DgField df = weak_derivative(f, space), dg = weak_derivative(g, space), dh = weak_derivative(h, space);
        double worst = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < dh.data().size(); ++i) {
            worst = std::max(worst, std::abs(dh.data()[i] - (a * df.data()[i] + b * dg.data()[i])));
            scale = std::max(scale, std::abs(dh.data()[i]));
        }
        return bound("dgcore", "weak derivative is linear", worst / scale, 1e-13);
    }});
    c.push_back({"dgcore", "basis mass matrix is diagonal", [] {
        double worst = 0.0;
        for (int p = 0; p <= 5; ++p) {
            const DgSpace space = walled_space(0.0, 1.0, 1, p);
            const auto& w = space.quadrature().weights;
            for (std::size_t i = 0; i < space.n_modes(); ++i)
                for (std::size_t j = 0; j < space.n_modes(); ++j) {
                    if (i == j) continue;
                    double m = 0.0;
                    for (std::size_t q = 0; q < space.n_qp(); ++q) m += w[q] * space.phi(q, i) * space.phi(q, j);
                    worst = std::max(worst, std::abs(m));
                }
        }
        return bound("dgcore", "basis mass matrix is diagonal", worst, 1e-13);
    }});

    // --- kernels --------------------------------------------------------------
    c.push_back({"kernels", "scalar and AVX2 kernels agree bitwise", [seed] {
        const std::string name = "scalar and AVX2 kernels agree bitwise";
        if (!kernels::backend_available(kernels::Backend::Avx2))
            return InvariantResult{"kernels", name, true, "AVX2 not available on this CPU; scalar only"};
        Rng rng(seed + 3);
        const auto& s = kernels::table(kernels::Backend::Scalar);
        const auto& v = kernels::table(kernels::Backend::Avx2);
        bool same = true;
        for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
            std::vector<double> h(n), hu(n), bx(n);
            for (std::size_t i = 0; i < n; ++i) {
                h[i] = uniform(rng, 0.01, 2.0);
                hu[i] = uniform(rng, -3.0, 3.0) * h[i];
                bx[i] = uniform(rng, -0.2, 0.2);
            }
            std::vector<double> a1(n), a2(n), b1(n), b2(n), c1(n), c2(n);
            s.swe_point_terms(h.data(), hu.data(), bx.data(), 9.81, 0.012, a1.data(), b1.data(), c1.data(), n);
            v.swe_point_terms(h.data(), hu.data(), bx.data(), 9.81, 0.012, a2.data(), b2.data(), c2.data(), n);
            same = same && !std::memcmp(a1.data(), a2.data(), n * sizeof(double)) &&
                   !std::memcmp(b1.data(), b2.data(), n * sizeof(double)) &&
                   !std::memcmp(c1.data(), c2.data(), n * sizeof(double));
            s.axpby(0.3, h.data(), -1.1, hu.data(), a1.data(), n);
            v.axpby(0.3, h.data(), -1.1, hu.data(), a2.data(), n);
            same = same && !std::memcmp(a1.data(), a2.data(), n * sizeof(double));
            const double w1 = s.max_wave_speed(h.data(), hu.data(), 9.81, n);
            const double w2 = v.max_wave_speed(h.data(), hu.data(), 9.81, n);
            same = same && !std::memcmp(&w1, &w2, sizeof(double));
        }
        return InvariantResult{"kernels", name, same, same ? "identical bits" : "mismatch"};
    }});

    // --- swe_solver -----------------------------------------------------------
    c.push_back({"swe_solver", "trace solve is consistent: solve_trace(q, q) = q", [seed] {
        Rng rng(seed + 4);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double h = uniform(rng, 0.01, 2.0), u = uniform(rng, -3.0, 3.0);
            const HydroState q{h, h * u};
            const TraceResult r = solve_trace(q, q, 9.81);
            worst = std::max({worst, std::abs(r.q.h - q.h) / q.h,
                              std::abs(r.q.hu - q.hu) / std::max(1.0, std::abs(q.hu))});
            if (!r.converged) worst = INFINITY;
        }
        return bound("swe_solver", "trace solve is consistent: solve_trace(q, q) = q", worst, 0.0);
    }});
    c.push_back({"swe_solver", "mass rhs sums to zero with walls", [] {
        const DgSpace space = walled_space(0.0, 10.0, 80);
        DgField q, b;
        smooth_state(space, q, b);
        PhysicsParams p;
        p.H0 = 0.8;
        const DgField r = nswe_rhs(space, q, b, p, WetMask::all_wet(space.n_elements(), 1e-4));
        const double rate = integrate(r, space, 0) / integrate(q, space, 0);
        return bound("swe_solver", "mass rhs sums to zero with walls", std::abs(rate), 1e-12);
    }});
    c.push_back({"swe_solver", "lake at rest over a piecewise-linear bed is preserved", [] {
        const DgSpace space = walled_space(0.0, 30.0, 120);
        const double H0 = 0.4;
        const DgField b = project([H0](double x) { return dingemans_bar_elevation(x) + H0; }, space);
        DgField q = space.make_field(2);
        for (std::size_t e = 0; e < space.n_elements(); ++e) {
            q(e, 0, 0) = H0 - b(e, 0, 0);
            q(e, 0, 1) = -b(e, 0, 1);
        }
        PhysicsParams p;
        p.H0 = H0;
        const DgField r = nswe_rhs(space, q, b, p, WetMask::all_wet(space.n_elements(), 4e-5));
        return bound("swe_solver", "lake at rest over a piecewise-linear bed is preserved",
                     max_abs(r.data()) / (p.g * H0), 1e-11);
    }});
    c.push_back({"swe_solver", "friction opposes positive velocity", [] {
        const DgSpace space = walled_space(0.0, 1.0, 4);
        const DgField q = project(std::vector<PointFunction>{[](double) { return 0.5; }, [](double) { return 0.4; }}, space);
        const DgField b = space.make_field(1);
        PhysicsParams off, on;
        on.cf = off.cf = 0.012;
        on.friction_on = true;
        const WetMask m = WetMask::all_wet(4, 1e-4);
        const DgField r0 = nswe_rhs(space, q, b, off, m), r1 = nswe_rhs(space, q, b, on, m);
        double worst = -INFINITY;
        for (std::size_t e = 0; e < 4; ++e) worst = std::max(worst, r1(e, 1, 0) - r0(e, 1, 0));
        return InvariantResult{"swe_solver", "friction opposes positive velocity", worst < 0.0,
                               "max friction contribution " + sci(worst) + " < 0"};
    }});

    // --- dispersive -----------------------------------------------------------
    c.push_back({"dispersive", "dispersive update leaves the depth unchanged", [] {
        const DgSpace space = walled_space(0.0, 10.0, 60);
        DgField q, b;
        smooth_state(space, q, b);
        PhysicsParams p;
        p.H0 = 0.8;
        const DgField s = compute_source_s(space, q, b, p);
        const DispersiveSolution sol = solve_w1w2(space, q, b, s, 1.0, p, {});
        const DgField r = dispersive_rhs(space, q, sol.w1, b, p, {});
        bool zero = true;
        for (std::size_t e = 0; e < space.n_elements(); ++e)
            for (std::size_t k = 0; k < space.n_modes(); ++k) zero = zero && r(e, 0, k) == 0.0;
        return InvariantResult{"dispersive", "dispersive update leaves the depth unchanged", zero,
                               zero ? "mass rhs exactly 0" : "nonzero mass rhs"};
    }});
    c.push_back({"dispersive", "zero source gives zero w1", [] {
        const DgSpace space = walled_space(0.0, 10.0, 60);
        DgField q, b;
        smooth_state(space, q, b);
        PhysicsParams p;
        const DispersiveSolution sol = solve_w1w2(space, q, b, space.make_field(1), 1.0, p, {});
        return bound("dispersive", "zero source gives zero w1", max_abs(sol.w1.data()), 1e-11);
    }});
    c.push_back({"dispersive", "w2 flux is single valued at interior nodes", [] {
        const DgSpace space = walled_space(0.0, 10.0, 60);
        DgField q, b;
        smooth_state(space, q, b);
        PhysicsParams p;
        const double tau = 1.0;
        const DgField s = compute_source_s(space, q, b, p);
        const DispersiveSolution sol = solve_w1w2(space, q, b, s, tau, p, {});
        double worst = 0.0;
        for (std::size_t n = 1; n < space.n_elements(); ++n) {
            const double what = sol.w1_hat(n, 0);
            const double left = space.right_trace(sol.w2, n - 1, 0) - tau * (space.right_trace(sol.w1, n - 1, 0) - what);
            const double right = -space.left_trace(sol.w2, n, 0) - tau * (space.left_trace(sol.w1, n, 0) - what);
            worst = std::max(worst, std::abs(left + right));
        }
        return bound("dispersive", "w2 flux is single valued at interior nodes", worst, 1e-10);
    }});
    c.push_back({"dispersive", "mirrored input gives mirrored, negated w1", [] {
        const std::size_t ne = 50;
        const DgSpace space = walled_space(-5.0, 5.0, ne);
        auto hfun = [](double x) { return 0.7 + 0.1 * std::exp(-(x - 1.0) * (x - 1.0)); };
        auto bfun = [](double x) { return 0.05 * std::tanh(x + 0.5); };
        auto sfun = [](double x) { return std::sin(0.9 * x) + 0.3 * x; };
        const DgField h = project(hfun, space), b = project(bfun, space), s = project(sfun, space);
        const DgField hm = project([&](double x) { return hfun(-x); }, space);
        const DgField bm = project([&](double x) { return bfun(-x); }, space);
        const DgField sm = project([&](double x) { return -sfun(-x); }, space);
        DgField q = space.make_field(2), qm = space.make_field(2);
        q.set_component(0, h);
        qm.set_component(0, hm);
        PhysicsParams p;
        const DispersiveSolution a = solve_w1w2(space, q, b, s, 1.0, p, {});
        const DispersiveSolution m = solve_w1w2(space, qm, bm, sm, 1.0, p, {});
        double worst = 0.0, scale = 1e-300;
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t k = 0; k < space.n_modes(); ++k) {
                const double sign = (k % 2 == 0) ? -1.0 : 1.0;
                worst = std::max(worst, std::abs(m.w1(ne - 1 - e, 0, k) - sign * a.w1(e, 0, k)));
                scale = std::max(scale, std::abs(a.w1(e, 0, k)));
            }
        for (std::size_t n = 0; n <= ne; ++n) worst = std::max(worst, std::abs(m.w1_hat(ne - n, 0) + a.w1_hat(n, 0)));
        return bound("dispersive", "mirrored input gives mirrored, negated w1", worst / scale, 1e-11);
    }});

    // --- morpho ---------------------------------------------------------------
    c.push_back({"morpho", "Exner rhs conserves sediment with closed ends", [] {
        const DgSpace space = walled_space(0.0, 10.0, 80);
        DgField q, b;
        smooth_state(space, q, b);
        const DgField r = exner_rhs(space, q, b, Grass{4.75e-3, 3.0}, WetMask::all_wet(80, 1e-4));
        double scale = 0.0;
        for (std::size_t e = 0; e < 80; ++e) scale = std::max(scale, std::abs(r(e, 0, 0)));
        return bound("morpho", "Exner rhs conserves sediment with closed ends",
                     std::abs(integrate(r, space, 0)) / std::max(scale, 1e-300), 1e-12);
    }});
    c.push_back({"morpho", "Grass flux is odd in u", [seed] {
        Rng rng(seed + 5);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double h = uniform(rng, 0.01, 2.0), u = uniform(rng, -3.0, 3.0);
            const Grass law{uniform(rng, 0.0, 0.01), uniform(rng, 1.0, 3.0)};
            worst = std::max(worst, std::abs(sediment_flux({h, h * u}, law) + sediment_flux({h, -h * u}, law)));
        }
        return bound("morpho", "Grass flux is odd in u", worst, 0.0);
    }});
    c.push_back({"morpho", "Roe velocity is a convex combination", [seed] {
        Rng rng(seed + 6);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const HydroState a{uniform(rng, 0.01, 2.0), 0.0}, b{uniform(rng, 0.01, 2.0), 0.0};
            const double ua = uniform(rng, -3.0, 3.0), ub = uniform(rng, -3.0, 3.0);
            const HydroState qa{a.h, a.h * ua}, qb{b.h, b.h * ub};
            const double r = roe_velocity(qa, qb);
            const double lo = std::min(qa.hu / qa.h, qb.hu / qb.h), hi = std::max(qa.hu / qa.h, qb.hu / qb.h);
            worst = std::max({worst, lo - r, r - hi});
        }
        return bound("morpho", "Roe velocity is a convex combination", worst, 1e-15);
    }});

    // --- coupled_solver -------------------------------------------------------
    c.push_back({"coupled_solver", "edge fluxes telescope: mass rhs sums to zero", [] {
        const DgSpace space = walled_space(0.0, 10.0, 80);
        DgField q, b;
        smooth_state(space, q, b);
        DgField p = space.make_field(3);
        for (std::size_t e = 0; e < 80; ++e)
            for (std::size_t k = 0; k < space.n_modes(); ++k) {
                p(e, 0, k) = q(e, 0, k);
                p(e, 1, k) = q(e, 1, k);
                p(e, 2, k) = b(e, 0, k);
            }
        PhysicsParams prm;
        const DgField r = coupled_rhs(space, p, prm, Grass{4.75e-3, 3.0}, WetMask::all_wet(80, 1e-4));
        const double rate = std::abs(integrate(r, space, 0)) / integrate(p, space, 0);
        const double bed_rate = std::abs(integrate(r, space, 2)) / integrate(p, space, 0);
        return bound("coupled_solver", "edge fluxes telescope: mass rhs sums to zero", std::max(rate, bed_rate), 1e-12);
    }});
    c.push_back({"coupled_solver", "w_nc is antisymmetric", [seed] {
        Rng rng(seed + 7);
        bool ok = true;
        for (int i = 0; i < 10000; ++i) {
            const CoupledState a{uniform(rng, 0.01, 2.0), uniform(rng, -3.0, 3.0), uniform(rng, -0.5, 0.5)};
            const CoupledState b{uniform(rng, 0.01, 2.0), uniform(rng, -3.0, 3.0), uniform(rng, -0.5, 0.5)};
            const Flux2 w1 = w_nc(a, b, 1.0, 9.81), w2 = w_nc(b, a, -1.0, 9.81);
            ok = ok && w1[0] == 0.0 && w2[0] == 0.0 && w1[1] == w2[1];
        }
        return InvariantResult{"coupled_solver", "w_nc is antisymmetric", ok, "10000 random pairs, exact"};
    }});
    c.push_back({"coupled_solver", "interface flux is continuous across branch switches", [seed] {
        Rng rng(seed + 8);
        const double g = 9.81;
        const Grass law{4.75e-3, 3.0};
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double hp = uniform(rng, 0.05, 2.0), hm = uniform(rng, 0.05, 2.0);
            const double up = uniform(rng, -1.0, 1.0), um = uniform(rng, -1.0, 1.0);
            const double bp = uniform(rng, -0.2, 0.2), bm = uniform(rng, -0.2, 0.2);
            auto flux = [&](double shift) {
                return coupled_interface_flux({hp, hp * (up + shift), bp}, {hm, hm * (um + shift), bm}, 1.0, g, law);
            };
            const WaveSpeeds s0 = characteristic_speeds({hp, hp * up}, {hm, hm * um}, 1.0, g);
            for (double root : {-s0.s_plus, -s0.s_minus}) {
                const double d = 1e-10;
                const CoupledFlux a = flux(root - d), b = flux(root + d);
                const double scale = 1.0 + std::abs(a.hydro[1]);
                worst = std::max({worst, std::abs(a.hydro[0] - b.hydro[0]) / scale,
                                  std::abs(a.hydro[1] - b.hydro[1]) / scale});
            }
        }
        return bound("coupled_solver", "interface flux is continuous across branch switches", worst, 1e-8);
    }});

    // --- stepper --------------------------------------------------------------
    auto soliton_setup = [](std::size_t n, SimState& s, PhysicsParams& prm, StepControls& ctl) {
        const SolitonParams sp{0.5, 0.1, 8.0, 9.81};
        prm.H0 = 0.5;
        ctl.dt = 0.01;
        ctl.limiter = false;
        ctl.breaking_threshold = 1e9;
        const DgSpace space = walled_space(0.0, 20.0, n);
        s.q = project(std::vector<PointFunction>{[sp](double x) { return soliton_state(sp, x, 0.0).h; },
                                                 [sp](double x) { return soliton_state(sp, x, 0.0).hu; }},
                      space);
        s.b = space.make_field(1);
        s.mask = WetMask::all_wet(n, ctl.h0(prm.H0));
        s.breaking.countdown.assign(n, 0);
        return space;
    };
    c.push_back({"stepper", "Strang step reversal error is at least third order in dt", [soliton_setup] {
        std::vector<double> err;
        for (double dt : {0.02, 0.01, 0.005}) {
            SimState s;
            PhysicsParams prm;
            StepControls ctl;
            const DgSpace space = soliton_setup(100, s, prm, ctl);
            const Grass law{};
            const StepContext ctx{space, prm, ctl, law};
            const DgField q0 = s.q;
            strang_step(ctx, s, dt);
            strang_step(ctx, s, -dt);
            double e2 = 0.0;
            for (std::size_t i = 0; i < q0.data().size(); ++i) e2 += std::pow(s.q.data()[i] - q0.data()[i], 2);
            err.push_back(std::sqrt(e2));
        }
        const double order = std::log2(err[1] / err[2]);
        return InvariantResult{"stepper", "Strang step reversal error is at least third order in dt", order >= 2.7,
                               "observed order " + sci(order) + " >= 2.7 (errors " + sci(err[0]) + ", " +
                                   sci(err[1]) + ", " + sci(err[2]) + ")"};
    }});
    c.push_back({"stepper", "Strang step conserves mass with walls", [soliton_setup] {
        SimState s;
        PhysicsParams prm;
        StepControls ctl;
        const DgSpace space = soliton_setup(200, s, prm, ctl);
        ctl.limiter = true;
        const Grass law{};
        const StepContext ctx{space, prm, ctl, law};
        const double m0 = integrate(s.q, space, 0);
        for (int i = 0; i < 20; ++i) strang_step(ctx, s, 0.01);
        const double rel = std::abs(integrate(s.q, space, 0) - m0) / m0;
        const bool clipped = s.audit.clip_mass > 0.0;
        InvariantResult r = bound("stepper", "Strang step conserves mass with walls", rel, 1e-12);
        if (clipped) r.passed = false, r.detail += " (clipping occurred)";
        return r;
    }});
    c.push_back({"stepper", "limiter never changes element means", [seed] {
        Rng rng(seed + 9);
        const DgSpace space = walled_space(0.0, 5.0, 64, 2);
        DgField q = space.make_field(2), b = space.make_field(1);
        for (std::size_t e = 0; e < 64; ++e) {
            q(e, 0, 0) = uniform(rng, 0.5, 1.0);
            q(e, 1, 0) = uniform(rng, -0.5, 0.5);
            b(e, 0, 0) = uniform(rng, 0.0, 0.2);
            for (std::size_t k = 1; k < 3; ++k) {
                q(e, 0, k) = uniform(rng, -0.2, 0.2);
                q(e, 1, k) = uniform(rng, -0.2, 0.2);
                b(e, 0, k) = uniform(rng, -0.05, 0.05);
            }
        }
        const DgField q0 = q, b0 = b;
        WetMask mask = WetMask::all_wet(64, 1e-4);
        mask.wet[10] = 0;
        const std::size_t n = limit_slopes(space, q, b, 0.0, mask) + limit_bed(space, b, 0.0, mask);
        bool same = n > 0;
        for (std::size_t e = 0; e < 64; ++e)
            same = same && q(e, 0, 0) == q0(e, 0, 0) && q(e, 1, 0) == q0(e, 1, 0) && b(e, 0, 0) == b0(e, 0, 0);
        return InvariantResult{"stepper", "limiter never changes element means", same,
                               std::to_string(n) + " slopes limited, means bitwise unchanged"};
    }});
    c.push_back({"stepper", "breaking indicator scales linearly with the depth jumps", [] {
        const DgSpace space = walled_space(0.0, 3.0, 3);
        auto make = [&](double h_left) {
            DgField q = space.make_field(2);
            const double hs[3] = {h_left, 1.0, 1.0};
            for (std::size_t e = 0; e < 3; ++e) {
                q(e, 0, 0) = hs[e];
                q(e, 1, 0) = 0.5 * hs[e];
            }
            return q;
        };
        const WetMask m = WetMask::all_wet(3, 1e-4);
        const double i1 = breaking_indicator(space, make(0.75), m, 1);
        const double i2 = breaking_indicator(space, make(0.5), m, 1);
        return InvariantResult{"stepper", "breaking indicator scales linearly with the depth jumps",
                               i1 > 0.0 && i2 == 2.0 * i1, sci(i1) + " -> " + sci(i2) + " for c = 2"};
    }});

    // --- scenarios ------------------------------------------------------------
    c.push_back({"scenarios", "trapezoidal bar reproduces its tabulated elevations", [] {
        const double xs[4] = {9.0, 13.0, 15.5, 20.0}, want[4] = {-0.25, -0.1, -0.25, -0.4};
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(dingemans_bar_elevation(xs[i]) - want[i]));
        const Scenario sc = build_scenario(default_config("dingemans_bar"));
        for (int i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(eval_x(sc.b0, sc.space, xs[i]) - 0.4 - want[i]));
        return bound("scenarios", "trapezoidal bar reproduces its tabulated elevations", worst, 1e-12);
    }});
    c.push_back({"scenarios", "beach shoreline lies 5.6 m from the toe", [] {
        const Scenario sc = build_scenario(default_config("sumer_beach"));
        const double H0 = sc.config.physics.H0;
        const double depth = H0 - eval_x(sc.b0, sc.space, H0 * 14.0);
        return bound("scenarios", "beach shoreline lies 5.6 m from the toe", std::abs(depth) +
                         std::abs(H0 * 14.0 - 5.6), 1e-12);
    }});

    // --- cli_io ---------------------------------------------------------------
    c.push_back({"cli_io", "identical configurations give byte-identical outputs", [seed] {
        const auto base = std::filesystem::temp_directory_path() / ("gnx_verify_" + std::to_string(seed));
        ScenarioConfig cfg = default_config("soliton_flat");
        cfg.elements = 80;
        cfg.controls.dt = 0.01;
        cfg.end_time = 0.3;
        cfg.output_every = 3;
        cfg.bed_every = 10;
        bool same = true;
        std::vector<std::string> first;
        for (int r = 0; r < 2; ++r) {
            cfg.out_dir = (base / ("run" + std::to_string(r))).string();
            std::filesystem::remove_all(cfg.out_dir);
            run(cfg);
            std::vector<std::string> files;
            for (const auto& f : std::filesystem::directory_iterator(cfg.out_dir))
                if (f.path().extension() == ".csv") files.push_back(f.path().filename().string());
            std::sort(files.begin(), files.end());
            if (r == 0) first = files;
            else same = same && files == first;
        }
        for (const auto& f : first)
            same = same && read_file(base / "run0" / f) == read_file(base / "run1" / f);
        std::filesystem::remove_all(base);
        return InvariantResult{"cli_io", "identical configurations give byte-identical outputs", same && !first.empty(),
                               std::to_string(first.size()) + " CSV files compared"};
    }});
    c.push_back({"cli_io", "manifest records water and bed mass", [seed] {
        const auto dir = std::filesystem::temp_directory_path() / ("gnx_verify_m" + std::to_string(seed));
        ScenarioConfig cfg = default_config("lake_at_rest");
        cfg.elements = 60;
        cfg.end_time = 0.1;
        cfg.out_dir = dir.string();
        const RunResult r = run(cfg);
        const auto& m = r.manifest.at("mass");
        bool ok = r.exit_code == kExitOk;
        for (const char* k : {"water_initial", "water_final", "bed_initial", "bed_final"})
            ok = ok && m.contains(k) && m.at(k).is_number();
        ok = ok && std::filesystem::exists(dir / "manifest.json");
        std::filesystem::remove_all(dir);
        return InvariantResult{"cli_io", "manifest records water and bed mass", ok, "mass entries present"};
    }});
    return c;
}

std::vector<InvariantResult> run_invariants(std::uint64_t seed) {
    std::vector<InvariantResult> out;
    for (const auto& check : invariant_suite(seed)) {
        try {
            out.push_back(check.run());
        } catch (const std::exception& e) {
            out.push_back({check.module, check.name, false, std::string("threw: ") + e.what()});
        }
    }
    return out;
}

}  // namespace gnx
