#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gnx/scenarios.hpp"

namespace gnx {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitSolver = 3 };

/// Syntax or semantic error in a configuration document. line() is 0 when the error
/// is not tied to one line (semantic validation).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Parses an INI-style document. [run] scenario selects the defaults, every other
/// key overrides one field. Unknown sections or keys, duplicates and malformed
/// values are rejected with their line number; dt and cfl are mutually exclusive.
/// The result is validated (ConfigError lists every violation).
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Writes every field so that parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// The resolved configuration as a JSON object with the same sections and keys.
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Lossless decimal formatting used in every CSV file (17 significant digits).
std::string format_number(double v);

struct RunOptions {
    bool quiet = true;
    std::ostream* log = nullptr;  ///< progress lines when not quiet
};

struct RunResult {
    int exit_code = kExitOk;
    std::string status;  ///< "complete" or "failed"
    nlohmann::json manifest;
};

/// Runs every wave of the configuration and writes into config.out_dir:
/// gauge_<k>.csv (t,zeta,h,u,b), bed_<step>.csv (x,b,delta_b) and manifest.json.
/// Solver failures are caught: outputs written so far are kept and the manifest is
/// marked partial. Never throws for solver errors; configuration errors are thrown.
RunResult run(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace gnx
