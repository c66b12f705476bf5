#pragma once

#include <cstdint>
#include <vector>

#include "cli/config.hpp"
#include "cli/output.hpp"

namespace liouville::cli {

/// The invariant suite: one named check per property group, randomized from `seed`.
std::vector<Check> run_verify(const ScenarioConfig& cfg, std::uint64_t seed);

}  // namespace liouville::cli
