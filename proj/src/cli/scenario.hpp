#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace liouville::cli {

/// The state described by a config, with whatever physical data it came from.
struct Scenario {
    SpectralGrid<double> grid;
    HSState<double> state;                          // unit Hilbert-Schmidt norm
    std::optional<ResonanceSpec<double>> resonance;
    std::optional<PureState<double>> pure;
    std::optional<LambdaKernel<double>> density;    // trace-one density matrix (pure or mixture)
    std::string description;
};

/// Throws ConfigError when the config has no [state] section.
Scenario build_scenario(const ScenarioConfig& cfg);

/// Requested time samples, snapped to the tau lattice when the config asks for it.
std::vector<double> time_samples(const ScenarioConfig& cfg, const SpectralGrid<double>& g);

/// Metadata lines shared by every CSV output.
std::vector<std::string> scenario_metadata(const std::string& command, const ScenarioConfig& cfg,
                                           const Scenario& sc);

}  // namespace liouville::cli
