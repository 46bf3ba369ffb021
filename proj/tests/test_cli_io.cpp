#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gnx/cli_io.hpp"

using namespace gnx;
namespace fs = std::filesystem;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("gnx_test_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("minimal config selects the scenario defaults") {
    const ScenarioConfig c = parse_config("[run]\nscenario = soliton_flat\n");
    CHECK(c == default_config("soliton_flat"));
    CHECK(c.physics.H0 == 0.5);
    CHECK(c.a0 == 0.1);
    CHECK(c.x0 == 5.0);
    CHECK(c.elements == 400);
    CHECK(c.controls.dt == 1e-4);
}

TEST_CASE("overrides, comments and lists") {
    const ScenarioConfig c = parse_config(
        "# header comment\n"
        "[run]\n"
        "scenario = sumer_beach ; trailing comment\n"
        "model = decoupled\n"
        "waves = 4\n"
        "[mesh]\n"
        "elements = 200\n"
        "[step]\n"
        "limiter = false\n"
        "[gauges]\n"
        "x = 1.5, 2.5,3\n");
    CHECK(c.scenario == "sumer_beach");
    CHECK(c.controls.model == Model::DecoupledGN);
    CHECK(c.waves == 4);
    CHECK(c.elements == 200);
    CHECK_FALSE(c.controls.limiter);
    CHECK(c.gauges == std::vector<double>{1.5, 2.5, 3.0});
}

TEST_CASE("syntax errors carry their line") {
    CHECK(error_line("[run\nscenario = soliton_flat\n") == 1);
    CHECK(error_line("[run]\nscenario = soliton_flat\n[bogus]\n") == 3);
    CHECK(error_line("[run]\nscenario = soliton_flat\nend_time 3\n") == 3);
    CHECK(error_line("scenario = soliton_flat\n") == 1);
    CHECK(error_line("[run]\nscenario = soliton_flat\nfoo = 1\n") == 3);
    CHECK(error_line("[run]\nscenario = soliton_flat\nend_time = 1\nend_time = 2\n") == 4);
    CHECK(error_line("[run]\nscenario = soliton_flat\n[mesh]\nelements = many\n") == 4);
    CHECK(error_line("[run]\nscenario = soliton_flat\n[mesh]\nelements = -3\n") == 4);
    CHECK(error_line("[run]\nscenario = soliton_flat\n[step]\nlimiter = maybe\n") == 4);
    CHECK(error_line("[run]\nscenario = nowhere\n") == 2);
    CHECK(error_line("[mesh]\nelements = 10\n") == 0);
}

TEST_CASE("dt and cfl are mutually exclusive") {
    CHECK(error_line("[run]\nscenario = soliton_flat\n[step]\ndt = 0.01\ncfl = 0.3\n") == 5);
    const ScenarioConfig c = parse_config("[run]\nscenario = soliton_flat\n[step]\ncfl = 0.3\n");
    CHECK(c.controls.cfl == 0.3);
    CHECK(c.controls.dt == 0.0);
}

TEST_CASE("semantic errors are all listed") {
    try {
        parse_config("[run]\nscenario = soliton_flat\nend_time = -1\n[mesh]\nx_max = -5\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        CHECK(m.find("end") != std::string::npos);
        CHECK(m.find("x_max") != std::string::npos);
        CHECK(e.line() == 0);
    }
}

TEST_CASE("serialization round trip") {
    for (const auto& name : scenario_names()) {
        CAPTURE(name);
        ScenarioConfig c = default_config(name);
        c.physics.g = 9.80665;
        c.a0 = 0.1 / 3.0;
        c.gauges.push_back(1.0 / 7.0);
        const std::string text = serialize_config(c);
        const ScenarioConfig back = parse_config(text);
        CHECK(back == c);
        CHECK(serialize_config(back) == text);
    }
    ScenarioConfig c = default_config("sumer_beach");
    c.controls.dt = 0.0;
    c.controls.cfl = 0.25;
    CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("number formatting is lossless") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(0.1) == "0.10000000000000001");
    for (double v : {1.0 / 3.0, -2.5e-17, 9.81, 1e300}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("config as JSON") {
    const auto j = config_to_json(default_config("dingemans_bar"));
    CHECK(j.at("run").at("scenario") == "dingemans_bar");
    CHECK(j.at("mesh").at("elements") == 600);
    CHECK(j.at("wave").at("period") == 2.2);
    CHECK(j.at("gauges").at("x").size() == 5);
}

TEST_CASE("lake at rest run writes flat gauges and a manifest") {
    const fs::path dir = fresh_dir("lake");
    ScenarioConfig c = default_config("lake_at_rest");
    c.elements = 120;
    c.end_time = 0.5;
    c.output_every = 5;
    c.bed_every = 50;
    c.out_dir = dir.string();
    const RunResult r = run(c);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.status == "complete");
    for (std::size_t k = 0; k < c.gauges.size(); ++k) {
        std::ifstream in(dir / ("gauge_" + std::to_string(k) + ".csv"));
        std::string line;
        std::getline(in, line);
        CHECK(line == "t,zeta,h,u,b");
        int rows = 0;
        while (std::getline(in, line)) {
            std::stringstream s(line);
            std::string t, zeta;
            std::getline(s, t, ',');
            std::getline(s, zeta, ',');
            CHECK(std::abs(std::stod(zeta)) <= 1e-11);
            ++rows;
        }
        CHECK(rows >= 20);
    }
    CHECK(slurp(dir / "bed_0.csv").rfind("x,b,delta_b\n", 0) == 0);
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m.at("status") == "complete");
    CHECK(m.at("partial") == false);
    CHECK(m.at("mass").at("water_initial").get<double>() > 0.0);
    CHECK(m.at("mass").contains("bed_final"));
    CHECK(m.at("config").at("run").at("scenario") == "lake_at_rest");
    fs::remove_all(dir);
}

TEST_CASE("solitary wave run reports its error") {
    const fs::path dir = fresh_dir("soliton");
    ScenarioConfig c = default_config("soliton_flat");
    c.elements = 100;
    c.controls.dt = 2e-3;
    c.end_time = 0.2;
    c.out_dir = dir.string();
    const RunResult r = run(c);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.manifest.at("soliton_error").at("zeta_l2_relative").get<double>() < 0.05);
    fs::remove_all(dir);
}

TEST_CASE("rigid beach: shallow-water and dispersive runs give different gauges") {
    std::string traces[2];
    int i = 0;
    for (Model m : {Model::NSWE, Model::GN}) {
        const fs::path dir = fresh_dir(std::string("beach_") + std::string(model_name(m)));
        ScenarioConfig c = default_config("sumer_beach");
        c.elements = 200;
        c.controls.dt = 1e-2;
        c.controls.model = m;
        c.end_time = 3.0;
        c.out_dir = dir.string();
        REQUIRE(run(c).exit_code == kExitOk);
        traces[i++] = slurp(dir / "gauge_1.csv");
        fs::remove_all(dir);
    }
    CHECK(traces[0] != traces[1]);
}

TEST_CASE("solver failure is reported with a partial manifest") {
    const fs::path dir = fresh_dir("fail");
    ScenarioConfig c = default_config("soliton_flat");
    c.elements = 40;
    c.controls.dt = 5.0;  // far beyond stability
    c.end_time = 50.0;
    c.out_dir = dir.string();
    const RunResult r = run(c);
    CHECK(r.exit_code == kExitSolver);
    CHECK(r.status == "failed");
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m.at("partial") == true);
    CHECK_FALSE(m.at("error").get<std::string>().empty());
    fs::remove_all(dir);
}
