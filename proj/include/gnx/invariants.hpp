#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gnx {

struct InvariantResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;  ///< measured value against its bound
};

struct InvariantCheck {
    std::string module;
    std::string name;
    std::function<InvariantResult()> run;
};

/// Property checks for every module (mesh, DG core, kernels, solvers, stepper,
/// scenarios, I/O). Randomized checks draw from a generator seeded with seed.
std::vector<InvariantCheck> invariant_suite(std::uint64_t seed = 20240611);

/// Runs every check; a check that throws counts as failed with the message as detail.
std::vector<InvariantResult> run_invariants(std::uint64_t seed = 20240611);

}  // namespace gnx
