#include "cli/run.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/scenario.hpp"
#include "cli/verify.hpp"

namespace liouville::cli {

namespace {

namespace fs = std::filesystem;

struct Invocation {
    std::string command;
    ScenarioConfig cfg;
    fs::path out_dir;
    std::optional<std::uint64_t> seed;
};

double range_excess(const std::vector<double>& ps) {
    double worst = 0;
    for (double p : ps) worst = std::max({worst, -p, p - 1});
    return worst;
}

double max_increase(const std::vector<double>& v) {
    double worst = 0;
    for (std::size_t i = 1; i < v.size(); ++i) worst = std::max(worst, v[i] - v[i - 1]);
    return worst;
}

std::string file_stem(const std::string& command) {
    std::string s = command;
    for (char& c : s) c = c == '-' ? '_' : c;
    return s;
}

const ResonanceSpec<double>& require_resonance(const Scenario& sc, const std::string& command) {
    if (!sc.resonance) throw ConfigError(command + " needs [state] kind = resonance");
    return *sc.resonance;
}

std::vector<Check> cmd_verify(const Invocation& inv, std::ostream& out) {
    const std::uint64_t seed = inv.seed.value_or(inv.cfg.verify.seed);
    out << "verify: seed " << seed << ", " << inv.cfg.verify.samples << " randomized states per group\n";
    return run_verify(inv.cfg, seed);
}

std::vector<Check> cmd_survival(const Invocation& inv, std::ostream& out) {
    const Scenario sc = build_scenario(inv.cfg);
    const std::vector<double> times = time_samples(inv.cfg, sc.grid);
    const std::vector<double> p = survival(sc.state, std::span<const double>(times)).values;
    std::vector<std::string> md = scenario_metadata(inv.command, inv.cfg, sc);
    std::vector<CsvColumn> columns{{"t", times}, {"value", p}};
    std::vector<Check> checks;
    checks.push_back(check_below("survival.range", range_excess(p), inv.cfg.tolerances.probability,
                                 "p(t) within [0, 1]"));
    checks.push_back(check_below("survival.monotone", max_increase(p), inv.cfg.tolerances.monotone,
                                 "p(t) nonincreasing"));
    if (sc.pure) {
        const std::vector<double> h = hilbert_survival(*sc.pure, std::span<const double>(times)).values;
        md.push_back("value: Liouville survival ||P_0 exp(-itL) rho||^2");
        md.push_back("reference: Hilbert-space survival |<psi, exp(-itH) psi>|^2");
        columns.push_back({"reference", h});
        checks.push_back(check_below("survival.reference_range", range_excess(h), inv.cfg.tolerances.probability,
                                     "Hilbert-space survival within [0, 1]"));
    } else if (sc.resonance) {
        const double rate = sc.resonance->decay_rate();
        std::vector<double> ref;
        double worst = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            ref.push_back(std::exp(-rate * times[i]));
            worst = std::max(worst, std::abs(p[i] - ref.back()) / ref.back());
        }
        md.push_back("value: Liouville survival ||P_0 exp(-itL) rho||^2");
        md.push_back("reference: exp(-2 |Im xi| t)");
        columns.push_back({"reference", ref});
        checks.push_back(check_below("survival.exponential", worst, inv.cfg.tolerances.survival,
                                     "relative deviation from exp(-2 |Im xi| t)"));
    } else {
        md.push_back("value: Liouville survival ||P_0 exp(-itL) rho||^2, rho = M^(1/2)");
    }
    write_csv(inv.out_dir / "survival.csv", md, columns);
    out << "wrote " << (inv.out_dir / "survival.csv").string() << '\n';
    return checks;
}

std::vector<Check> cmd_resonance(const Invocation& inv, std::ostream& out) {
    const Scenario sc = build_scenario(inv.cfg);
    const ResonanceSpec<double>& spec = require_resonance(sc, inv.command);
    const auto& g = sc.grid;
    const Tolerances& tol = inv.cfg.tolerances;
    const HSState<double> rho = resonance_state(spec, g);
    const double b = -spec.xi().imag();
    const std::vector<double> times = time_samples(inv.cfg, g);

    std::vector<double> residual;
    for (double t : times) {
        const HSState<double> expected = std::exp(Complex<double>(0, -t) * spec.xi()) * rho;
        residual.push_back(distance(w_apply(rho, t), expected) / rho.norm());
    }
    const std::vector<double> p = survival(sc.state, std::span<const double>(times)).values;
    std::vector<double> ref;
    double worst = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        ref.push_back(std::exp(-2 * b * times[i]));
        worst = std::max(worst, std::abs(p[i] - ref.back()) / ref.back());
    }
    const std::vector<double> one{1.0};
    const double p1 = survival(sc.state, std::span<const double>(one)).values[0];

    std::vector<Check> checks;
    const double analytic_norm = std::numbers::pi / b;
    checks.push_back(check_below("resonance.norm", std::abs(rho.squared_norm() - analytic_norm) / analytic_norm,
                                 tol.survival, "||rho_xi||^2 against pi / |Im xi|"));
    checks.push_back(check_below("resonance.hardy_leak", hardy_decompose(rho).second.norm() / rho.norm(),
                                 tol.hardy_leak, "relative norm of the lower Hardy component"));
    checks.push_back(check_below("resonance.eigen_residual", *std::max_element(residual.begin(), residual.end()),
                                 tol.eigen_residual, "max_t ||W_t rho - exp(-i t xi) rho|| / ||rho||"));
    checks.push_back(check_below("resonance.survival", worst, tol.survival,
                                 "max relative deviation of p(t) from exp(-2 |Im xi| t)"));
    checks.push_back(check_below("resonance.survival_t1", std::abs(p1 - std::exp(-2 * b)) / std::exp(-2 * b),
                                 tol.survival, "p(1) against exp(-2 |Im xi|)"));
    checks.push_back(check_below("resonance.range", range_excess(p), tol.probability, "p(t) within [0, 1]"));

    std::vector<std::string> md = scenario_metadata(inv.command, inv.cfg, sc);
    std::vector<std::string> md_survival = md;
    md_survival.push_back("value: Liouville survival of the normalized resonance state");
    md_survival.push_back("reference: exp(-2 |Im xi| t)");
    write_csv(inv.out_dir / "resonance.csv", md_survival, {{"t", times}, {"value", p}, {"reference", ref}});
    md.push_back("value: ||W_t rho - exp(-i t xi) rho|| / ||rho||");
    write_csv(inv.out_dir / "resonance_residual.csv", md, {{"t", times}, {"value", residual}});
    out << "wrote " << (inv.out_dir / "resonance.csv").string() << " and "
        << (inv.out_dir / "resonance_residual.csv").string() << '\n';
    return checks;
}

std::vector<Check> cmd_decay_window(const Invocation& inv, std::ostream& out) {
    // the cuts of P'_t live on the tau lattice, so the time grid always snaps
    ScenarioConfig cfg = inv.cfg;
    cfg.times.snap = true;
    const Scenario sc = build_scenario(cfg);
    const Tolerances& tol = cfg.tolerances;
    const std::vector<double> times = time_samples(cfg, sc.grid);
    const std::vector<double> p = survival(sc.state, std::span<const double>(times)).values;
    const double unstable = project_P(sc.state, 0.0).squared_norm();
    std::vector<double> window;
    std::vector<double> ref;
    double complement = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        window.push_back(times[i] > 0 ? decay_window(sc.state, 0.0, times[i]) : 0.0);
        ref.push_back(unstable - p[i]);
        complement = std::max(complement, std::abs(window.back() - ref.back()));
    }
    double decrease = 0;
    for (std::size_t i = 1; i < window.size(); ++i) decrease = std::max(decrease, window[i - 1] - window[i]);

    std::vector<Check> checks;
    checks.push_back(check_below("decay_window.range", range_excess(window), tol.probability,
                                 "P(]0,t]) within [0, 1]"));
    checks.push_back(check_below("decay_window.monotone", decrease, tol.monotone, "P(]0,t]) nondecreasing"));
    checks.push_back(check_below("decay_window.complementarity", complement, tol.complementarity,
                                 "P(]0,t]) = ||P_0 rho||^2 - p(t)"));
    if (sc.resonance) {
        checks.push_back(check_below("decay_window.past", decay_window(sc.state, -5.0, 0.0), tol.projection,
                                     "P(]-5,0]) = 0 for an unstable state"));
    }

    std::vector<std::string> md = scenario_metadata(inv.command, cfg, sc);
    md.push_back("value: P(]0,t], rho) = ||P'_t rho||^2 - ||P'_0 rho||^2");
    md.push_back("reference: ||P_0 rho||^2 - p(t) (equals 1 - p(t) for unstable states); ||P_0 rho||^2 = " +
                 format_number(unstable));
    write_csv(inv.out_dir / "decay_window.csv", md, {{"t", times}, {"value", window}, {"reference", ref}});
    out << "wrote " << (inv.out_dir / "decay_window.csv").string() << '\n';
    return checks;
}

std::vector<Check> cmd_uncertainty(const Invocation& inv, std::ostream& out) {
    const Scenario sc = build_scenario(inv.cfg);
    const Tolerances& tol = inv.cfg.tolerances;
    const TimeStats<double> st = sc.density ? time_stats(sc.state, *sc.density) : time_stats(sc.state);
    const double bound = 1 / (2 * std::sqrt(2.0));
    out << "<T>      = " << format_number(st.mean_T) << '\n';
    out << "Delta T  = " << format_number(st.delta_T) << '\n';
    std::vector<Check> checks;
    if (st.product) {
        out << "Delta E  = " << format_number(*st.delta_E) << '\n';
        out << "product  = " << format_number(*st.product) << '\n';
        out << "bound    = " << format_number(bound) << " (margin " << format_number(*st.product - bound) << ")\n";
        checks.push_back(check_above("uncertainty.bound", *st.product, bound - tol.uncertainty_slack,
                                     "Delta E Delta T against 1/(2 sqrt 2)"));
    }
    if (sc.resonance) {
        const double b = -sc.resonance->xi().imag();
        out << "Delta E  undefined for a resonance state (no density matrix)\n";
        checks.push_back(check_below("uncertainty.mean_T", std::abs(st.mean_T + 1 / (2 * b)) * 2 * b, tol.moments,
                                     "relative deviation of <T> from -1/(2 |Im xi|)"));
        checks.push_back(check_below("uncertainty.delta_T", std::abs(st.delta_T - 1 / (2 * b)) * 2 * b, tol.moments,
                                     "relative deviation of Delta T from 1/(2 |Im xi|)"));
    }
    const double edge = tau_edge_fraction(to_tau(sc.state));
    checks.push_back(check_below("uncertainty.tau_edge", edge, 1e-6, "tau mass near the window edge"));
    return checks;
}

using Handler = std::function<std::vector<Check>(const Invocation&, std::ostream&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"verify", cmd_verify},
        {"survival", cmd_survival},
        {"resonance", cmd_resonance},
        {"decay-window", cmd_decay_window},
        {"uncertainty", cmd_uncertainty},
    };
    return table;
}

const std::map<std::string, std::string>& help_text() {
    static const std::map<std::string, std::string> table{
        {"verify", "Run the invariant suite and print a pass/fail table"},
        {"survival", "Liouville survival probability over the time grid"},
        {"resonance", "Resonance eigenvalue residual and exponential survival"},
        {"decay-window", "Probability of decay in ]0, t] over the time grid"},
        {"uncertainty", "Time moments and the energy-time uncertainty product"},
    };
    return table;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time operator and decay probabilities in Liouville space"};
    app.name(args.empty() ? "liouville" : fs::path(args.front()).filename().string());
    app.require_subcommand(1, 1);
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    for (const auto& [name, help] : help_text()) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Scenario config file")->required();
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Seed for randomized checks");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_success;
        }
        err << "error: " << e.what() << '\n' << app.help();
        return exit_config_error;
    }

    Invocation inv;
    inv.command = app.get_subcommands().front()->get_name();
    inv.seed = seed;
    std::vector<Check> checks;
    try {
        inv.cfg = load_config(config_path);
        inv.out_dir = !out_dir.empty() ? fs::path(out_dir) : inv.cfg.out_dir ? fs::path(*inv.cfg.out_dir) : fs::path(".");
        fs::create_directories(inv.out_dir);
        checks = handlers().at(inv.command)(inv, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const Error& e) {
        err << "precondition violated: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    }

    print_table(out, checks);
    const fs::path summary = inv.out_dir / (file_stem(inv.command) + ".json");
    try {
        write_summary(summary, inv.command, inv.cfg, checks);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    }
    out << "wrote " << summary.string() << '\n';
    return all_pass(checks) ? exit_success : exit_check_failure;
}

}  // namespace liouville::cli
