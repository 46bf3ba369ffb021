#include "gnx/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "gnx/kernels.hpp"
#include "gnx/swe_solver.hpp"

namespace gnx {

namespace fs = std::filesystem;

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, int line) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        throw ConfigError("expected a finite number, got '" + std::string(v) + "'", line);
    return out;
}

long long to_integer(std::string_view v, int line) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end)
        throw ConfigError("expected an integer, got '" + std::string(v) + "'", line);
    return out;
}

bool to_bool(std::string_view v, int line) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError("expected true or false, got '" + std::string(v) + "'", line);
}

std::vector<double> to_list(std::string_view v, int line) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.size() - start : comma - start));
        if (item.empty()) throw ConfigError("empty entry in list", line);
        out.push_back(to_double(item, line));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string list_text(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
    return s;
}

// One configurable field: how to read it and how to write it back.
struct Key {
    std::string section;
    std::string name;
    std::function<void(ScenarioConfig&, std::string_view, int)> set;
    std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

Key number(std::string section, std::string name, double ScenarioConfig::*field) {
    return {std::move(section), std::move(name),
            [field](ScenarioConfig& c, std::string_view v, int l) { c.*field = to_double(v, l); },
            [field](const ScenarioConfig& c) { return std::optional(format_number(c.*field)); }};
}

template <class Getter>
Key number_at(std::string section, std::string name, Getter ref) {
    return {std::move(section), std::move(name),
            [ref](ScenarioConfig& c, std::string_view v, int l) { ref(c) = to_double(v, l); },
            [ref](const ScenarioConfig& c) {
                return std::optional(format_number(ref(c)));
            }};
}

template <class Getter>
Key integer_at(std::string section, std::string name, Getter ref, long long lo) {
    return {std::move(section), std::move(name),
            [ref, lo](ScenarioConfig& c, std::string_view v, int l) {
                const long long x = to_integer(v, l);
                if (x < lo) throw ConfigError("value must be >= " + std::to_string(lo), l);
                ref(c) = static_cast<std::remove_cvref_t<decltype(ref(c))>>(x);
            },
            [ref](const ScenarioConfig& c) {
                return std::optional(std::to_string(ref(c)));
            }};
}

template <class Getter>
Key boolean_at(std::string section, std::string name, Getter ref) {
    return {std::move(section), std::move(name),
            [ref](ScenarioConfig& c, std::string_view v, int l) { ref(c) = to_bool(v, l); },
            [ref](const ScenarioConfig& c) {
                return std::optional(std::string(ref(c) ? "true" : "false"));
            }};
}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        k.push_back({"run", "scenario", [](ScenarioConfig&, std::string_view, int) {},
                     [](const ScenarioConfig& c) { return std::optional(c.scenario); }});
        k.push_back({"run", "model",
                     [](ScenarioConfig& c, std::string_view v, int l) {
                         try {
                             c.controls.model = parse_model(v);
                         } catch (const std::exception&) {
                             throw ConfigError("unknown model '" + std::string(v) + "'", l);
                         }
                     },
                     [](const ScenarioConfig& c) { return std::optional(std::string(model_name(c.controls.model))); }});
        k.push_back(number("run", "end_time", &ScenarioConfig::end_time));
        k.push_back(integer_at("run", "waves", [](auto& c) -> auto& { return c.waves; }, 1));
        k.push_back(integer_at("run", "seed", [](auto& c) -> auto& { return c.seed; }, 0));

        k.push_back(number("mesh", "x_min", &ScenarioConfig::x_min));
        k.push_back(number("mesh", "x_max", &ScenarioConfig::x_max));
        k.push_back(integer_at("mesh", "elements", [](auto& c) -> auto& { return c.elements; }, 1));
        k.push_back(integer_at("mesh", "order", [](auto& c) -> auto& { return c.order; }, 0));

        k.push_back(number_at("physics", "g", [](auto& c) -> auto& { return c.physics.g; }));
        k.push_back(number_at("physics", "H0", [](auto& c) -> auto& { return c.physics.H0; }));
        k.push_back(number_at("physics", "alpha", [](auto& c) -> auto& { return c.physics.alpha; }));
        k.push_back(number_at("physics", "cf", [](auto& c) -> auto& { return c.physics.cf; }));
        k.push_back(boolean_at("physics", "friction", [](auto& c) -> auto& { return c.physics.friction_on; }));

        k.push_back(number("wave", "a0", &ScenarioConfig::a0));
        k.push_back(number("wave", "x0", &ScenarioConfig::x0));
        k.push_back(number("wave", "amplitude", &ScenarioConfig::wave_amplitude));
        k.push_back(number("wave", "period", &ScenarioConfig::wave_period));
        k.push_back(number("wave", "ramp_periods", &ScenarioConfig::ramp_periods));

        // dt and cfl: only the active one is written; setting one clears the other
        k.push_back({"step", "dt",
                     [](ScenarioConfig& c, std::string_view v, int l) {
                         c.controls.dt = to_double(v, l);
                         c.controls.cfl = 0.0;
                     },
                     [](const ScenarioConfig& c) -> std::optional<std::string> {
                         if (c.controls.dt > 0.0) return format_number(c.controls.dt);
                         return std::nullopt;
                     }});
        k.push_back({"step", "cfl",
                     [](ScenarioConfig& c, std::string_view v, int l) {
                         c.controls.cfl = to_double(v, l);
                         c.controls.dt = 0.0;
                     },
                     [](const ScenarioConfig& c) -> std::optional<std::string> {
                         if (c.controls.dt > 0.0) return std::nullopt;
                         return format_number(c.controls.cfl);
                     }});
        k.push_back({"step", "h0_min",
                     [](ScenarioConfig& c, std::string_view v, int l) { c.controls.h0_min = to_double(v, l); },
                     [](const ScenarioConfig& c) -> std::optional<std::string> {
                         if (!c.controls.h0_min) return std::nullopt;
                         return format_number(*c.controls.h0_min);
                     }});
        k.push_back(number_at("step", "rewet_factor", [](auto& c) -> auto& { return c.controls.rewet_factor; }));
        k.push_back(number_at("step", "breaking_threshold",
                              [](auto& c) -> auto& { return c.controls.breaking_threshold; }));
        k.push_back(integer_at("step", "breaking_persistence",
                               [](auto& c) -> auto& { return c.controls.breaking_persistence; }, 0));
        k.push_back(boolean_at("step", "limiter", [](auto& c) -> auto& { return c.controls.limiter; }));
        k.push_back(number_at("step", "limiter_M", [](auto& c) -> auto& { return c.controls.limiter_M; }));
        k.push_back(number_at("step", "bed_limiter_M", [](auto& c) -> auto& { return c.controls.bed_limiter_M; }));
        k.push_back(integer_at("step", "bed_update_every",
                               [](auto& c) -> auto& { return c.controls.bed_update_every; }, 1));
        k.push_back(number_at("step", "tau_hdg", [](auto& c) -> auto& { return c.controls.tau_hdg; }));
        k.push_back(number_at("step", "dispersive_min_depth",
                              [](auto& c) -> auto& { return c.controls.dispersive_min_depth; }));
        k.push_back(number_at("step", "sediment_min_depth",
                              [](auto& c) -> auto& { return c.controls.sediment_min_depth; }));

        k.push_back(number("sediment", "A", &ScenarioConfig::sediment_A));
        k.push_back(number("sediment", "m", &ScenarioConfig::sediment_m));

        k.push_back({"gauges", "x",
                     [](ScenarioConfig& c, std::string_view v, int l) { c.gauges = to_list(v, l); },
                     [](const ScenarioConfig& c) { return std::optional(list_text(c.gauges)); }});

        k.push_back({"output", "dir",
                     [](ScenarioConfig& c, std::string_view v, int l) {
                         if (v.empty()) throw ConfigError("output dir must not be empty", l);
                         c.out_dir = std::string(v);
                     },
                     [](const ScenarioConfig& c) { return std::optional(c.out_dir); }});
        k.push_back(integer_at("output", "every", [](auto& c) -> auto& { return c.output_every; }, 1));
        k.push_back(integer_at("output", "bed_every", [](auto& c) -> auto& { return c.bed_every; }, 0));
        return k;
    }();
    return table;
}

const Key* find_key(std::string_view section, std::string_view name) {
    for (const auto& k : keys())
        if (k.section == section && k.name == name) return &k;
    return nullptr;
}

struct Entry {
    std::string section, key, value;
    int line;
};

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    std::vector<Entry> entries;
    std::set<std::string> sections;
    for (const auto& k : keys()) sections.insert(k.section);

    std::string section;
    std::set<std::pair<std::string, std::string>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto hash = raw.find_first_of("#;");
        const std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!sections.count(section)) throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (section.empty()) throw ConfigError("key '" + key + "' outside of any section", line_no);
        if (!find_key(section, key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
        if (!seen.insert({section, key}).second)
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no);
        entries.push_back({section, key, value, line_no});
    }

    const auto scen = std::find_if(entries.begin(), entries.end(),
                                   [](const Entry& e) { return e.section == "run" && e.key == "scenario"; });
    if (scen == entries.end()) throw ConfigError("missing required key 'scenario' in [run]");
    ScenarioConfig cfg;
    try {
        cfg = default_config(scen->value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), scen->line);
    }

    const Entry* dt = nullptr;
    const Entry* cfl = nullptr;
    for (const auto& e : entries) {
        if (e.section == "step" && e.key == "dt") dt = &e;
        if (e.section == "step" && e.key == "cfl") cfl = &e;
    }
    if (dt && cfl)
        throw ConfigError("dt and cfl are mutually exclusive", std::max(dt->line, cfl->line));

    for (const auto& e : entries) find_key(e.section, e.key)->set(cfg, e.value, e.line);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& config) {
    std::string out;
    std::string section;
    for (const auto& k : keys()) {
        const auto v = k.get(config);
        if (!v) continue;
        if (k.section != section) {
            if (!section.empty()) out += "\n";
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += k.name + " = " + *v + "\n";
    }
    return out;
}

nlohmann::json config_to_json(const ScenarioConfig& config) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : keys()) {
        auto& sec = j[k.section];
        if (sec.is_null()) sec = nlohmann::json::object();
        const auto v = k.get(config);
        if (!v) continue;
        if (k.name == "x" && k.section == "gauges") sec[k.name] = config.gauges;
        else sec[k.name] = nlohmann::json::accept(*v) ? nlohmann::json::parse(*v) : nlohmann::json(*v);
    }
    return j;
}

namespace {

void write_gauge_csv(const fs::path& path, const GaugeRecord& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,zeta,h,u,b\n";
    for (const auto& s : g.samples)
        out << format_number(s[0]) << ',' << format_number(s[1]) << ',' << format_number(s[2]) << ','
            << format_number(s[3]) << ',' << format_number(s[4]) << '\n';
}

void write_bed_csv(const fs::path& path, const DgSpace& space, const DgField& b, const DgField& b_initial) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "x,b,delta_b\n";
    const int pts = space.order() + 1;
    for (std::size_t e = 0; e < space.n_elements(); ++e)
        for (int j = 0; j < pts; ++j) {
            const double xi = -1.0 + (2.0 * j + 1.0) / pts;
            const double v = eval_at(b, space, e, xi), v0 = eval_at(b_initial, space, e, xi);
            out << format_number(space.mesh().to_physical(e, xi)) << ',' << format_number(v) << ','
                << format_number(v - v0) << '\n';
        }
}

nlohmann::json number_or_null(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const Scenario sc = build_scenario(config);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    auto log = [&](const std::string& msg) {
        if (!options.quiet && options.log) *options.log << msg << '\n';
    };

    Simulation sim(sc.space, sc.q0, sc.b0, config.physics, config.controls, config.law());
    std::vector<GaugeRecord> gauges = make_gauges(sim.space(), config.gauges);
    const double H0 = config.physics.H0;
    const DgField b_start = sim.state().b;
    const double water0 = sim.water_mass(), bed0 = sim.bed_mass();
    const std::size_t fallbacks0 = trace_fallback_count();

    std::vector<std::string> bed_files;
    auto snapshot_bed = [&](const Simulation& s) {
        const std::string name = "bed_" + std::to_string(s.state().step) + ".csv";
        if (!bed_files.empty() && bed_files.back() == name) return;
        write_bed_csv(dir / name, s.space(), s.state().b, b_start);
        bed_files.push_back(name);
    };

    RunResult result;
    nlohmann::json waves = nlohmann::json::array();
    std::string error;
    record_gauges(sim.space(), sim.state().q, sim.state().b, H0, gauges, sim.state().t);
    snapshot_bed(sim);
    try {
        for (int w = 0; w < config.waves; ++w) {
            if (w > 0) {
                // reset the free surface and velocity, keep the bed
                DgField q = sc.q0;
                const DgField& b = sim.state().b;
                for (std::size_t e = 0; e < q.n_elements(); ++e)
                    for (std::size_t k = 0; k < q.n_modes(); ++k) q(e, 0, k) += sc.b0(e, 0, k) - b(e, 0, k);
                sim.reset_hydro(q);
            }
            const double bed_start = sim.bed_mass(), water_start = sim.water_mass();
            const double t_end = sim.state().t + config.end_time;
            double next_report = sim.state().t;
            log("wave " + std::to_string(w + 1) + "/" + std::to_string(config.waves));
            sim.run_until(t_end, [&](const Simulation& s) {
                const std::size_t step = s.state().step;
                if (step % static_cast<std::size_t>(config.output_every) == 0)
                    record_gauges(s.space(), s.state().q, s.state().b, H0, gauges, s.state().t);
                if (config.bed_every > 0 && step % static_cast<std::size_t>(config.bed_every) == 0) snapshot_bed(s);
                if (s.state().t >= next_report) {
                    next_report += config.end_time / 10.0;
                    log("  t = " + format_number(s.state().t) + "  step " + std::to_string(step));
                }
            });
            record_gauges(sim.space(), sim.state().q, sim.state().b, H0, gauges, sim.state().t);
            const double bed_end = sim.bed_mass();
            waves.push_back({{"index", w + 1},
                             {"t_end", sim.state().t},
                             {"water_mass_start", water_start},
                             {"water_mass_end", sim.water_mass()},
                             {"bed_mass_change", bed_end - bed_start},
                             {"bed_mass_relative_change",
                              bed_start != 0.0 ? (bed_end - bed_start) / std::abs(bed_start) : 0.0}});
        }
        result.status = "complete";
        result.exit_code = kExitOk;
    } catch (const std::exception& e) {
        error = e.what();
        result.status = "failed";
        result.exit_code = kExitSolver;
        log(std::string("solver failure: ") + e.what());
    }

    nlohmann::json gauge_files = nlohmann::json::array();
    for (std::size_t k = 0; k < gauges.size(); ++k) {
        const std::string name = "gauge_" + std::to_string(k) + ".csv";
        write_gauge_csv(dir / name, gauges[k]);
        gauge_files.push_back({{"file", name}, {"x", gauges[k].x}});
    }
    if (sim.state().b.all_finite()) snapshot_bed(sim);

    const SimState& st = sim.state();
    nlohmann::json m;
    m["status"] = result.status;
    m["partial"] = result.exit_code != kExitOk;
    if (!error.empty()) m["error"] = error;
    m["config"] = config_to_json(config);
    m["kernel_backend"] = std::string(kernels::backend_name(kernels::active().backend));
    m["steps"] = st.step;
    m["final_time"] = st.t;
    const double water1 = sim.water_mass(), bed1 = sim.bed_mass();
    m["mass"] = {{"water_initial", water0},
                 {"water_final", water1},
                 {"water_relative_change", (water1 - water0) / water0},
                 {"bed_initial", bed0},
                 {"bed_final", bed1},
                 {"bed_relative_change", bed0 != 0.0 ? (bed1 - bed0) / std::abs(bed0) : 0.0}};
    m["audit"] = {{"clip_mass_added", st.audit.clip_mass},
                  {"max_step_clip_fraction", st.audit.max_clip_fraction},
                  {"limited_elements", st.audit.limited},
                  {"dispersive_solves", st.audit.dispersive_solves},
                  {"trace_fallbacks", trace_fallback_count() - fallbacks0}};
    m["breaking"] = {{"first_x", number_or_null(st.breaking.first_x)},
                     {"first_t", number_or_null(st.breaking.first_t)},
                     {"flagged_steps", st.breaking.flagged_steps}};
    m["waves"] = waves;
    if (sc.exact && st.q.all_finite()) {
        const SolitonParams sp{H0, config.a0, config.x0, config.physics.g};
        const SolitonError se = soliton_error(sim.space(), st.q, sp, st.t);
        const ErrorNorms en = error_norms(sim.space(), st.q, 0, [&](double x) { return soliton_state(sp, x, st.t).h; });
        m["soliton_error"] = {{"time", st.t},
                              {"zeta_l2", en.l2},
                              {"zeta_linf", en.linf},
                              {"zeta_l2_relative", se.l2_relative},
                              {"peak_relative", se.peak_relative},
                              {"peak_x", se.peak_x}};
    }
    m["files"] = {{"gauges", gauge_files}, {"bed", bed_files}};

    std::ofstream mf(dir / "manifest.json");
    mf << m.dump(2) << '\n';
    result.manifest = std::move(m);
    return result;
}

}  // namespace gnx
