#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace liouville::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& where, const std::string& raw) {
    const std::string text = trim(raw);
    double v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(where + ": expected a number, got '" + raw + "'");
    }
    if (!std::isfinite(v)) throw ConfigError(where + ": value must be finite");
    return v;
}

long long to_integer(const std::string& where, const std::string& raw) {
    const std::string text = trim(raw);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(where + ": expected an integer, got '" + raw + "'");
    }
    return v;
}

Index to_count(const std::string& where, const std::string& raw) {
    const long long v = to_integer(where, raw);
    if (v <= 0) throw ConfigError(where + ": must be positive");
    return static_cast<Index>(v);
}

bool to_bool(const std::string& where, const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(where + ": expected true or false, got '" + raw + "'");
}

std::vector<std::string> split_top_level(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

using Section = std::map<std::string, std::string>;

void require_known(const std::string& name, const Section& section, const std::set<std::string>& known) {
    for (const auto& [key, value] : section) {
        if (!known.count(key)) throw ConfigError("[" + name + "]: unknown key '" + key + "'");
    }
}

std::string required(const std::string& name, const Section& section, const std::string& key) {
    const auto it = section.find(key);
    if (it == section.end()) throw ConfigError("[" + name + "]: missing required key '" + key + "'");
    return it->second;
}

GridParams parse_grid(const std::string& name, const Section& s) {
    require_known(name, s, {"nu_max", "n_nu", "n_e", "e_max"});
    GridParams g;
    g.nu_max = to_double(name + ".nu_max", required(name, s, "nu_max"));
    g.n_nu = to_count(name + ".n_nu", required(name, s, "n_nu"));
    g.n_e = to_count(name + ".n_e", required(name, s, "n_e"));
    if (s.count("e_max")) g.e_max = to_double(name + ".e_max", s.at("e_max"));
    try {
        (void)g.build();
    } catch (const Error& e) {
        throw ConfigError("[" + name + "]: " + e.what());
    }
    return g;
}

StateSpec parse_state(const Section& s) {
    require_known("state", s, {"kind", "re_xi", "im_xi", "profile", "profiles", "weights"});
    StateSpec spec;
    const std::string kind = trim(required("state", s, "kind"));
    if (kind == "resonance") {
        spec.kind = StateKind::resonance;
        const double re = s.count("re_xi") ? to_double("state.re_xi", s.at("re_xi")) : 0.0;
        const double im = to_double("state.im_xi", required("state", s, "im_xi"));
        if (!(im < 0)) {
            throw ConfigError("state.im_xi = " + trim(s.at("im_xi")) +
                              " violates Im xi < 0: resonance poles lie in the open lower half-plane");
        }
        spec.xi = {re, im};
        if (s.count("profile")) spec.profile = parse_profile(s.at("profile"));
    } else if (kind == "pure") {
        spec.kind = StateKind::pure;
        spec.profile = parse_profile(required("state", s, "profile"));
    } else if (kind == "mixture") {
        spec.kind = StateKind::mixture;
        spec.profiles = parse_profile_list(required("state", s, "profiles"));
        for (const auto& w : split_top_level(required("state", s, "weights"))) {
            spec.weights.push_back(to_double("state.weights", w));
        }
        if (spec.weights.size() != spec.profiles.size()) {
            throw ConfigError("state: " + std::to_string(spec.weights.size()) + " weights for " +
                              std::to_string(spec.profiles.size()) + " profiles");
        }
        double total = 0;
        for (double w : spec.weights) {
            if (!(w > 0)) throw ConfigError("state.weights must be positive");
            total += w;
        }
        for (double& w : spec.weights) w /= total;
    } else {
        throw ConfigError("state.kind must be resonance, pure or mixture, got '" + kind + "'");
    }
    if (spec.kind != StateKind::resonance && (s.count("re_xi") || s.count("im_xi"))) {
        throw ConfigError("state: re_xi/im_xi only apply to kind = resonance");
    }
    return spec;
}

TimeSpec parse_times(const Section& s) {
    require_known("times", s, {"start", "stop", "count", "snap"});
    TimeSpec t;
    if (s.count("start")) t.start = to_double("times.start", s.at("start"));
    if (s.count("stop")) t.stop = to_double("times.stop", s.at("stop"));
    if (s.count("count")) t.count = to_count("times.count", s.at("count"));
    if (s.count("snap")) t.snap = to_bool("times.snap", s.at("snap"));
    if (t.start < 0) throw ConfigError("times.start must be >= 0");
    if (t.count > 1 && !(t.stop > t.start)) throw ConfigError("times.stop must exceed times.start");
    return t;
}

Tolerances parse_tolerances(const Section& s) {
    Tolerances t;
    const std::map<std::string, double*> fields{
        {"eigen_residual", &t.eigen_residual},   {"survival", &t.survival},
        {"semigroup", &t.semigroup},             {"projection", &t.projection},
        {"hardy_leak", &t.hardy_leak},           {"commutation", &t.commutation},
        {"complementarity", &t.complementarity}, {"monotone", &t.monotone},
        {"moments", &t.moments},                 {"delta_e", &t.delta_e},
        {"uncertainty_slack", &t.uncertainty_slack}, {"contrast_margin", &t.contrast_margin},
        {"probability", &t.probability},
    };
    for (const auto& [key, value] : s) {
        const auto it = fields.find(key);
        if (it == fields.end()) throw ConfigError("[tolerances]: unknown key '" + key + "'");
        *it->second = to_double("tolerances." + key, value);
        if (*it->second < 0) throw ConfigError("tolerances." + key + " must be >= 0");
    }
    return t;
}

VerifyParams parse_verify(const Section& s) {
    require_known("verify", s, {"samples", "physical_samples", "seed"});
    VerifyParams v;
    if (s.count("samples")) v.samples = to_count("verify.samples", s.at("samples"));
    if (s.count("physical_samples")) v.physical_samples = to_count("verify.physical_samples", s.at("physical_samples"));
    if (s.count("seed")) {
        const long long seed = to_integer("verify.seed", s.at("seed"));
        if (seed < 0) throw ConfigError("verify.seed must be >= 0");
        v.seed = static_cast<std::uint64_t>(seed);
    }
    return v;
}

}  // namespace

SpectralGrid<double> GridParams::build() const {
    if (e_max) return build_grid(nu_max, n_nu, *e_max, n_e);
    return build_grid_commensurate(nu_max, n_nu, n_e);
}

Profile parse_profile(const std::string& raw) {
    const std::string text = trim(raw);
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') {
        throw ConfigError("profile '" + raw + "' must look like family(p1, p2, ...)");
    }
    const std::string name = trim(text.substr(0, open));
    Profile p;
    bool found = false;
    for (ProfileFamily f : {ProfileFamily::indicator, ProfileFamily::gaussian, ProfileFamily::two_bump,
                            ProfileFamily::exponential}) {
        if (name == profile_name(f)) {
            p.family = f;
            found = true;
        }
    }
    if (!found) {
        throw ConfigError("unknown profile family '" + name +
                          "' (expected indicator, gaussian, two_bump or exponential)");
    }
    const std::string args = text.substr(open + 1, text.size() - open - 2);
    if (!trim(args).empty()) {
        for (const auto& a : split_top_level(args)) p.params.push_back(to_double("profile " + name, a));
    }
    try {
        validate_profile(p);
    } catch (const Error& e) {
        throw ConfigError(std::string("profile ") + text + ": " + e.what());
    }
    return p;
}

std::vector<Profile> parse_profile_list(const std::string& text) {
    std::vector<Profile> out;
    for (const auto& item : split_top_level(text)) out.push_back(parse_profile(item));
    return out;
}

std::string format_profile(const Profile& p) {
    std::ostringstream os;
    os << profile_name(p.family) << '(';
    for (std::size_t i = 0; i < p.params.size(); ++i) os << (i ? ", " : "") << p.params[i];
    os << ')';
    return os.str();
}

const char* state_kind_name(StateKind k) {
    switch (k) {
        case StateKind::resonance: return "resonance";
        case StateKind::pure: return "pure";
        case StateKind::mixture: return "mixture";
    }
    return "?";
}

ScenarioConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
    }

    ScenarioConfig cfg;
    for (const auto& [name, section] : tree) {
        if (section.empty() && !section.data().empty()) {
            throw ConfigError("key '" + name + "' must appear inside a [section]");
        }
        auto& echo = cfg.echo[name];
        for (const auto& [key, value] : section) echo[key] = trim(value.data());
    }

    const std::set<std::string> known{"grid", "physical_grid", "energy_grid", "state", "times",
                                      "tolerances", "verify", "output"};
    for (const auto& [name, section] : cfg.echo) {
        if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
    }
    if (!cfg.echo.count("grid")) throw ConfigError("missing required section [grid]");

    const Section empty;
    auto section = [&](const std::string& name) -> const Section& {
        const auto it = cfg.echo.find(name);
        return it == cfg.echo.end() ? empty : it->second;
    };
    cfg.grid = parse_grid("grid", section("grid"));
    if (cfg.echo.count("physical_grid")) cfg.physical_grid = parse_grid("physical_grid", section("physical_grid"));
    if (cfg.echo.count("energy_grid")) cfg.energy_grid = parse_grid("energy_grid", section("energy_grid"));
    if (cfg.echo.count("state")) cfg.state = parse_state(section("state"));
    cfg.times = parse_times(section("times"));
    cfg.tolerances = parse_tolerances(section("tolerances"));
    cfg.verify = parse_verify(section("verify"));
    require_known("output", section("output"), {"dir"});
    if (section("output").count("dir")) cfg.out_dir = section("output").at("dir");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace liouville::cli
