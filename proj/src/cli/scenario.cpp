#include "cli/scenario.hpp"

#include "cli/output.hpp"

namespace liouville::cli {

namespace {

CVector<double> resonance_profile(const StateSpec& spec, const SpectralGrid<double>& g) {
    if (spec.profile) return sample_profile(g, *spec.profile).amplitudes();
    return CVector<double>::Constant(g.n_e(), 1.0 / std::sqrt(g.e_max()));
}

std::string describe(const StateSpec& spec) {
    switch (spec.kind) {
        case StateKind::resonance:
            return "resonance xi=" + format_number(spec.xi.real()) + (spec.xi.imag() < 0 ? "" : "+") +
                   format_number(spec.xi.imag()) + "i profile=" +
                   (spec.profile ? format_profile(*spec.profile) : std::string("flat"));
        case StateKind::pure:
            return "pure profile=" + format_profile(*spec.profile);
        case StateKind::mixture: {
            std::string s = "mixture";
            for (std::size_t i = 0; i < spec.profiles.size(); ++i) {
                s += " " + format_number(spec.weights[i]) + "*" + format_profile(spec.profiles[i]);
            }
            return s;
        }
    }
    return "?";
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& cfg) {
    if (!cfg.state) throw ConfigError("this command needs a [state] section");
    const StateSpec& spec = *cfg.state;
    const SpectralGrid<double> g = cfg.grid.build();
    switch (spec.kind) {
        case StateKind::resonance: {
            ResonanceSpec<double> r(spec.xi, resonance_profile(spec, g));
            HSState<double> s = resonance_state(r, g).normalized();
            return Scenario{g, std::move(s), std::move(r), std::nullopt, std::nullopt, describe(spec)};
        }
        case StateKind::pure: {
            PureState<double> psi = sample_profile(g, *spec.profile);
            LambdaKernel<double> m = embed_pure(psi);
            HSState<double> s = lambda_to_nue(m);
            return Scenario{g, std::move(s), std::nullopt, std::move(psi), std::move(m), describe(spec)};
        }
        case StateKind::mixture: {
            CMatrix<double> m = CMatrix<double>::Zero(g.n_e(), g.n_e());
            for (std::size_t i = 0; i < spec.profiles.size(); ++i) {
                m += spec.weights[i] * embed_pure(sample_profile(g, spec.profiles[i])).values();
            }
            LambdaKernel<double> density(g, std::move(m));
            HSState<double> s = lambda_to_nue(embed_density(density)).normalized();
            return Scenario{g, std::move(s), std::nullopt, std::nullopt, std::move(density), describe(spec)};
        }
    }
    throw ConfigError("unknown state kind");
}

std::vector<double> time_samples(const ScenarioConfig& cfg, const SpectralGrid<double>& g) {
    const TimeSpec& t = cfg.times;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(t.count));
    for (Index i = 0; i < t.count; ++i) {
        const double frac = t.count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(t.count - 1);
        double v = t.start + frac * (t.stop - t.start);
        if (t.snap) v = snap_to_lattice(g, v);
        if (v == 0) v = 0.0;
        if (!out.empty() && !(v > out.back())) {
            throw ConfigError("times: samples collide after snapping to the lattice (spacing " +
                              format_number(g.d_tau()) + "); reduce times.count or raise grid.nu_max");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> scenario_metadata(const std::string& command, const ScenarioConfig& cfg,
                                           const Scenario& sc) {
    const auto& g = sc.grid;
    const BoundaryMass<double> bm = boundary_mass(sc.state);
    std::vector<std::string> md;
    md.push_back("command: " + command);
    md.push_back("grid: nu_max=" + format_number(g.nu_max()) + " n_nu=" + std::to_string(g.n_nu()) +
                 " e_max=" + format_number(g.e_max()) + " n_e=" + std::to_string(g.n_e()) +
                 " d_nu=" + format_number(g.d_nu()) + " d_tau=" + format_number(g.d_tau()));
    md.push_back("state: " + sc.description);
    md.push_back("normalization: state rescaled to unit Hilbert-Schmidt norm");
    md.push_back("boundary_mass: nu_edge=" + format_number(bm.nu_edge) + " e_edge=" + format_number(bm.e_edge) +
                 " tau_edge=" + format_number(tau_edge_fraction(to_tau(sc.state))));
    md.push_back(std::string("times: ") + (cfg.times.snap ? "snapped to multiples of d_tau" : "as requested"));
    return md;
}

}  // namespace liouville::cli
