#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <iostream>

#include "gnx/cli_io.hpp"
#include "gnx/invariants.hpp"
#include "gnx/kernels.hpp"

namespace {

int simulate(const std::string& path, const std::string& scenario, const std::string& model,
             const std::string& out_dir, double end_time, double dt, double cfl, bool quiet) {
    gnx::ScenarioConfig cfg;
    try {
        cfg = path.empty() ? gnx::default_config(scenario) : gnx::load_config(path);
        if (!path.empty() && !scenario.empty() && scenario != cfg.scenario)
            throw gnx::ConfigError("--scenario " + scenario + " conflicts with the config file (" + cfg.scenario + ")");
        if (!model.empty()) cfg.controls.model = gnx::parse_model(model);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (end_time > 0.0) cfg.end_time = end_time;
        if (dt > 0.0) cfg.controls.dt = dt, cfg.controls.cfl = 0.0;
        if (cfl > 0.0) cfg.controls.cfl = cfl, cfg.controls.dt = 0.0;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return gnx::kExitConfig;
    }
    const gnx::RunResult r = gnx::run(cfg, {quiet, &std::cerr});
    if (r.exit_code != gnx::kExitOk)
        std::cerr << "solver failure: " << r.manifest.value("error", std::string("unknown")) << '\n';
    else if (!quiet)
        std::cerr << "wrote " << cfg.out_dir << '\n';
    return r.exit_code;
}

int verify(std::uint64_t seed) {
    std::size_t failed = 0;
    for (const auto& r : gnx::run_invariants(seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(15) << r.module << r.name << " ["
                  << r.detail << "]\n";
        failed += !r.passed;
    }
    std::cout << (failed ? std::to_string(failed) + " invariant(s) failed" : std::string("all invariants hold"))
              << '\n';
    return failed ? 1 : gnx::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D dispersive shallow-water and bed-evolution solver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gnx 1.0");

    std::string path, scenario, model, out_dir;
    double end_time = 0.0, dt = 0.0, cfl = 0.0;
    bool quiet = false;
    auto* sim = app.add_subcommand("simulate", "Run a configuration file or a built-in scenario");
    sim->add_option("config", path, "Configuration file (INI sections, see README)")->check(CLI::ExistingFile);
    sim->add_option("--scenario", scenario, "Built-in scenario used when no config file is given");
    sim->add_option("--model", model, "nswe, gn, coupled or decoupled")
        ->check(CLI::IsMember({"nswe", "gn", "coupled", "decoupled", "NSWE", "GN"}));
    sim->add_option("--out-dir", out_dir, "Output directory");
    sim->add_option("--end-time", end_time, "End time per wave in seconds")->check(CLI::PositiveNumber);
    auto* dt_opt = sim->add_option("--dt", dt, "Fixed time step")->check(CLI::PositiveNumber);
    auto* cfl_opt = sim->add_option("--cfl", cfl, "Adaptive time step with this CFL number")->check(CLI::PositiveNumber);
    dt_opt->excludes(cfl_opt);
    sim->add_flag("--quiet", quiet, "No progress output");

    auto* list = app.add_subcommand("list-scenarios", "Print the built-in scenarios");

    std::uint64_t seed = 20240611;
    auto* ver = app.add_subcommand("verify", "Run the built-in property suite");
    ver->add_option("--seed", seed, "Seed for randomized checks");

    try {
        app.parse(argc, argv);
        if (*sim && path.empty() && scenario.empty())
            throw CLI::ValidationError("simulate", "needs a config file or --scenario");
        if (*sim && path.empty()) {
            const auto& names = gnx::scenario_names();
            if (std::find(names.begin(), names.end(), scenario) == names.end())
                throw CLI::ValidationError("--scenario", "unknown scenario '" + scenario + "'");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gnx::kExitUsage;
    }

    if (*list) {
        for (const auto& n : gnx::scenario_names()) std::cout << std::left << std::setw(16) << n << gnx::scenario_description(n) << '\n';
        return gnx::kExitOk;
    }
    if (*ver) {
        std::cout << "kernel backend: " << gnx::kernels::backend_name(gnx::kernels::active().backend) << '\n';
        return verify(seed);
    }
    return simulate(path, scenario, model, out_dir, end_time, dt, cfl, quiet);
}
