#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liouville/liouville_time.hpp"

namespace liouville::cli {

/// Malformed or invalid configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridParams {
    double nu_max = 0;
    Index n_nu = 0;
    Index n_e = 0;
    std::optional<double> e_max;  // defaults to n_e d_nu

    SpectralGrid<double> build() const;
};

enum class StateKind { resonance, pure, mixture };

struct StateSpec {
    StateKind kind = StateKind::resonance;
    std::complex<double> xi;
    std::optional<Profile> profile;  // resonance: energy profile (flat when absent)
    std::vector<Profile> profiles;   // mixture components
    std::vector<double> weights;     // mixture weights, rescaled to unit sum
};

struct TimeSpec {
    double start = 0;
    double stop = 5;
    Index count = 51;
    bool snap = true;
};

struct Tolerances {
    double eigen_residual = 1e-2;
    double survival = 1e-2;
    double semigroup = 1e-6;
    double projection = 1e-10;
    double hardy_leak = 1e-3;
    double commutation = 1e-6;
    double complementarity = 1e-6;
    double monotone = 1e-10;
    double moments = 1e-3;
    double delta_e = 1e-6;
    double uncertainty_slack = 0.01;
    double contrast_margin = 0.1;
    double probability = 1e-10;
};

struct VerifyParams {
    Index samples = 20;
    Index physical_samples = 50;
    std::uint64_t seed = 1;
};

struct ScenarioConfig {
    GridParams grid;
    GridParams physical_grid{8.0, 1024, 512, 8.0};
    GridParams energy_grid{2.0, 4096, 1024, 1.0};
    std::optional<StateSpec> state;
    TimeSpec times;
    Tolerances tolerances;
    VerifyParams verify;
    std::optional<std::string> out_dir;
    // section -> key -> raw value, as read
    std::map<std::string, std::map<std::string, std::string>> echo;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

/// "gaussian(1.5, 0.3)"
Profile parse_profile(const std::string& text);
/// "indicator(0, 1), gaussian(2, 0.3)"
std::vector<Profile> parse_profile_list(const std::string& text);
std::string format_profile(const Profile& p);
const char* state_kind_name(StateKind k);

}  // namespace liouville::cli
