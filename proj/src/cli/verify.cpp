#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace liouville::cli {

namespace {

using Grid = SpectralGrid<double>;
using State = HSState<double>;
using cd = std::complex<double>;

struct Sampler {
    std::mt19937_64 rng;

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

    CMatrix<double> noise(Index rows, Index cols) {
        std::normal_distribution<double> n(0.0, 1.0);
        CMatrix<double> m(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) m(i, j) = cd(n(rng), n(rng));
        return m;
    }

    State white(const Grid& g) { return State(g, noise(g.n_nu(), g.n_e())).normalized(); }

    CVector<double> energy_profile(const Grid& g) {
        CVector<double> p = noise(g.n_e(), 1);
        return p / std::sqrt(p.squaredNorm() * g.d_e());
    }

    // Gaussians in nu carrying random tau offsets of either sign; localized well inside
    // the tau window, generally with both Hardy components.
    State localized(const Grid& g, int terms = 3) {
        const double reach = std::min(5.0, g.nu_max() / 10);
        const double shift = std::min(20.0, 0.04 * g.n_nu() * g.d_tau());
        CMatrix<double> v = CMatrix<double>::Zero(g.n_nu(), g.n_e());
        for (int t = 0; t < terms; ++t) {
            const double c = uniform(-reach, reach);
            const double w = uniform(0.4, 2.0);
            const double sh = uniform(-shift, shift);
            const CVector<double> e = noise(g.n_e(), 1);
            for (Index k = 0; k < g.n_nu(); ++k) {
                const double x = (g.nu(k) - c) / w;
                v.row(k) += std::exp(-x * x / 2) * std::polar(1.0, -sh * g.nu(k)) * e.transpose();
            }
        }
        return State(g, v).normalized();
    }

    // Sums of smooth bumps with compact nu support.
    State compact(const Grid& g, int terms = 3) {
        const double reach = std::min(6.0, g.nu_max() / 8);
        CMatrix<double> v = CMatrix<double>::Zero(g.n_nu(), g.n_e());
        for (int t = 0; t < terms; ++t) {
            const double c = uniform(-reach, reach);
            const double w = uniform(1.5, 4.0);
            const double ph = uniform(-3, 3);
            const CVector<double> e = noise(g.n_e(), 1);
            for (Index k = 0; k < g.n_nu(); ++k) {
                const double u = (g.nu(k) - c) / w;
                if (std::abs(u) >= 1) continue;
                v.row(k) += std::exp(-1 / (1 - u * u)) * std::polar(1.0, ph * g.nu(k)) * e.transpose();
            }
        }
        return State(g, v).normalized();
    }

    // Finite sums of resonances with distinct poles.
    State hardy(const Grid& g, int terms = 3) {
        const double lo = std::max(0.2, 10 * g.d_nu());
        const double hi = std::min(1.0, g.nu_max() / 50);
        const double reach = std::min(5.0, g.nu_max() / 10);
        State s = State::zero(g);
        for (int i = 0; i < terms; ++i) {
            const ResonanceSpec<double> spec(cd(uniform(-reach, reach), -uniform(lo, hi)), energy_profile(g));
            s = s + cd(uniform(-1, 1), uniform(-1, 1)) * resonance_state(spec, g);
        }
        return s.normalized();
    }
};

double rel(double err, double scale) { return scale > 0 ? err / scale : err; }

std::vector<cd> admissible_poles(const Grid& g, const ScenarioConfig& cfg) {
    std::vector<cd> poles;
    for (cd xi : {cd(0, -0.5), cd(1, -0.2), cd(2, -1)}) {
        const double b = -xi.imag();
        if (b >= 10 * g.d_nu() && b <= g.nu_max() / 50 && std::abs(xi.real()) < g.nu_max() / 4) poles.push_back(xi);
    }
    if (cfg.state && cfg.state->kind == StateKind::resonance) poles.push_back(cfg.state->xi);
    if (poles.empty()) {
        throw ConfigError("[grid] cannot host any test resonance: need 10 d_nu <= |Im xi| <= nu_max / 50");
    }
    return poles;
}

CVector<double> flat(const Grid& g) { return CVector<double>::Constant(g.n_e(), 1.0 / std::sqrt(g.e_max())); }

struct ProbabilityRange {
    double low = std::numeric_limits<double>::infinity();
    double high = -std::numeric_limits<double>::infinity();
    void add(double p) {
        low = std::min(low, p);
        high = std::max(high, p);
    }
    void add(const std::vector<double>& ps) {
        for (double p : ps) add(p);
    }
    // distance outside [0, 1]
    double excess() const { return std::max({0.0, -low, high - 1}); }
};

double max_increase(const std::vector<double>& v) {
    double worst = 0;
    for (std::size_t i = 1; i < v.size(); ++i) worst = std::max(worst, v[i] - v[i - 1]);
    return worst;
}

std::vector<double> survival_values(const State& s, const std::vector<double>& times) {
    return survival(s, std::span<const double>(times)).values;
}

}  // namespace

std::vector<Check> run_verify(const ScenarioConfig& cfg, std::uint64_t seed) {
    const Tolerances& tol = cfg.tolerances;
    const Grid desk = cfg.grid.build();
    const Grid phys = cfg.physical_grid.build();
    const Grid fine = cfg.energy_grid.build();
    const int samples = static_cast<int>(cfg.verify.samples);
    Sampler rand{std::mt19937_64(seed)};
    ProbabilityRange probabilities;
    std::vector<Check> checks;

    {
        // grids
        double worst = 0;
        const Grid small = build_grid_commensurate(phys.nu_max(), std::min<Index>(phys.n_nu(), 256),
                                                   std::min<Index>(phys.n_e(), 64));
        for (int i = 0; i < std::min(samples, 5); ++i) {
            const LambdaKernel<double> k(small, rand.noise(small.n_e(), small.n_e()));
            const State s = lambda_to_nue(k);
            worst = std::max(worst, rel(std::abs(s.norm() - k.norm()), k.norm()));
            worst = std::max(worst, (nue_to_lambda(s).values() - k.values()).cwiseAbs().maxCoeff());
        }
        checks.push_back(check_below("grid.coordinate_change", worst, 1e-12,
                                     "lambda_to_nue preserves the norm; round trip is the identity"));
        double lattice = 0;
        for (const Grid* g : {&desk, &phys, &fine}) {
            lattice = std::max(lattice, std::abs(g->nu(g->nu_zero_index())));
            for (Index j = 0; j < g->n_e(); ++j) lattice = std::max(lattice, std::abs(g->lambda(j) - g->e(j)));
        }
        checks.push_back(check_below("grid.lattice", lattice, 0.0, "nu = 0 is a sample; lambda and E grids coincide"));
    }

    {
        double group = 0;
        double self_adjoint = 0;
        double commute = 0;
        for (int i = 0; i < samples; ++i) {
            const State a = rand.white(desk);
            const State b = rand.white(desk);
            const double t = rand.uniform(-20, 20);
            const double t2 = rand.uniform(-20, 20);
            group = std::max(group, std::abs(evolve(a, t).norm() - 1));
            group = std::max(group, distance(evolve(evolve(a, t), t2), evolve(a, t + t2)));
            // ||U_h a - a|| <= h max|nu| ||a||
            const double h = 1e-9;
            group = std::max(group, distance(evolve(a, h), a) - h * desk.nu_max());
            const cd lhs = inner(a, apply_L(b));
            self_adjoint = std::max(self_adjoint, rel(std::abs(lhs - inner(apply_L(a), b)), std::abs(lhs)));
            const State la = apply_L(a);
            commute = std::max(commute, rel(distance(evolve(la, t), apply_L(evolve(a, t))), la.norm()));
        }
        checks.push_back(check_below("liouville.unitary_group", group, 1e-12,
                                     "U_t composition, unitarity and continuity"));
        checks.push_back(check_below("liouville.L_self_adjoint", self_adjoint, 1e-12, "<a, L b> = <L a, b>"));
        checks.push_back(check_below("liouville.evolve_commutes_L", commute, 1e-12, "U_t L = L U_t"));

        double embed = 0;
        const RVector<double> obs = sample_observable(phys, [](double l) { return l * l - std::cos(l); });
        for (int i = 0; i < std::min(samples, 4); ++i) {
            const Profile p1{ProfileFamily::gaussian, {rand.uniform(1, 3), rand.uniform(0.2, 0.6)}};
            const Profile p2{ProfileFamily::indicator, {rand.uniform(0, 1), rand.uniform(1.5, 3)}};
            const auto psi = sample_profile(phys, p1);
            double direct = 0;
            for (Index j = 0; j < phys.n_e(); ++j) direct += obs[j] * std::norm(psi.amplitudes()[j]) * phys.d_e();
            embed = std::max(embed, rel(std::abs(expectation(embed_pure(psi), obs) - direct), std::abs(direct)));
            const double w = rand.uniform(0.1, 0.9);
            const LambdaKernel<double> m(phys, w * embed_pure(psi).values() +
                                                   (1 - w) * embed_pure(sample_profile(phys, p2)).values());
            const cd trace = (m.values() * phys.d_e() * obs.cast<cd>().asDiagonal()).trace();
            embed = std::max(embed, rel(std::abs(expectation(embed_density(m), obs) - trace.real()),
                                        std::abs(trace)));
        }
        checks.push_back(check_below("liouville.embedding_expectation", embed, 1e-10,
                                     "<A> of embed_pure and embed_density match <psi, A psi> and Tr(M A)"));
    }

    {
        double parseval = 0;
        double projection = 0;
        double nesting = 0;
        double intertwining = 0;
        double monotone = 0;
        double hardy_split = 0;
        for (int i = 0; i < samples; ++i) {
            const State w = rand.white(desk);
            const TauState<double> ts = to_tau(w);
            parseval = std::max(parseval, std::abs(ts.norm() - 1));
            parseval = std::max(parseval, distance(from_tau(ts), w));

            const State r = rand.white(desk);
            const double tau = rand.uniform(-30, 30);
            const double tau2 = tau + rand.uniform(0, 30);
            const State pw = project_P(w, tau);
            projection = std::max(projection, distance(project_P(pw, tau), pw));
            projection = std::max(projection, std::abs(inner(pw, r) - inner(w, project_P(r, tau))));
            projection = std::max(projection, std::max(pw.norm() - 1, 0.0));
            nesting = std::max(nesting, distance(project_P(project_P(w, tau2), tau), pw));
            monotone = std::max(monotone, pw.norm() - project_P(w, tau2).norm());

            const State s = rand.localized(desk);
            const double t = snap_to_lattice(desk, rand.uniform(-10, 10));
            intertwining = std::max(intertwining, distance(evolve(project_P(evolve(s, -t), tau), t),
                                                           project_P(s, tau + t)));

            const auto [plus, minus] = hardy_decompose(w);
            hardy_split = std::max(hardy_split, std::abs(inner(plus, minus)));
            hardy_split = std::max(hardy_split, std::abs(plus.squared_norm() + minus.squared_norm() - 1));
        }
        checks.push_back(check_below("time_op.parseval", parseval, 1e-12, "to_tau is unitary; from_tau inverts it"));
        checks.push_back(check_below("time_op.projection", projection, tol.projection,
                                     "P_tau idempotent, self-adjoint, norm-nonincreasing"));
        checks.push_back(check_below("time_op.nesting", nesting, tol.projection, "P_tau P_tau' = P_tau for tau <= tau'"));
        checks.push_back(check_below("time_op.intertwining", intertwining, tol.projection,
                                     "U_t P_tau U_-t = P_(tau+t) at lattice t"));
        checks.push_back(check_below("time_op.monotone_subspaces", monotone, tol.projection,
                                     "||P_tau s|| nondecreasing in tau"));
        checks.push_back(check_below("time_op.hardy_split", hardy_split, tol.projection,
                                     "rho+ orthogonal to rho-, Pythagoras"));

        double leak = 0;
        for (cd xi : admissible_poles(desk, cfg)) {
            const State rho = resonance_state(ResonanceSpec<double>(xi, flat(desk)), desk).normalized();
            leak = std::max(leak, hardy_decompose(rho).second.norm());
        }
        checks.push_back(check_below("time_op.resonance_hardy", leak, tol.hardy_leak,
                                     "resonance states lie in the upper Hardy class"));

        double commutation = 0;
        double weyl = 0;
        const WarningSink quiet = [](std::string_view) {};
        for (int i = 0; i < std::min(samples, 4); ++i) {
            const State b = rand.compact(desk);
            const State tl = apply_T(apply_L(b), quiet);
            const State lt = apply_L(apply_T(b, quiet));
            commutation = std::max(commutation, distance(tl - lt, cd(0, 1) * b));
            const double t = rand.uniform(-4, 4);
            const State expected = apply_T(b, quiet) + cd(t) * b;
            weyl = std::max(weyl, rel(distance(evolve(apply_T(evolve(b, t), quiet), -t), expected), expected.norm()));
        }
        checks.push_back(check_below("time_op.commutation", commutation, tol.commutation,
                                     "TL - LT = i on smooth compactly supported states"));
        checks.push_back(check_below("time_op.weyl", weyl, tol.commutation, "U_-t T U_t = T + t"));
    }

    {
        double law = 0;
        double complementarity = 0;
        double past = 0;
        for (int i = 0; i < samples; ++i) {
            const State s = rand.hardy(desk);
            const double t = snap_to_lattice(desk, rand.uniform(0.05, 2));
            const double t2 = snap_to_lattice(desk, rand.uniform(0.05, 2));
            law = std::max(law, distance(w_apply(w_apply(s, t), t2), w_apply(s, t + t2)));
            const std::vector<double> one{t};
            const double p = survival_values(s, one)[0];
            const double window = decay_window(s, 0.0, t);
            probabilities.add(p);
            probabilities.add(window);
            complementarity = std::max(complementarity, std::abs(window + p - 1));
            past = std::max(past, decay_window(s, -5.0, 0.0));
        }
        checks.push_back(check_below("semigroup.law", law, tol.semigroup, "W_t' W_t = W_(t+t') on Hardy states"));
        checks.push_back(check_below("semigroup.complementarity", complementarity, tol.complementarity,
                                     "P(]0,t]) + p(t) = 1 on Hardy states"));
        checks.push_back(check_below("semigroup.decay_window_past", past, tol.projection,
                                     "no decay before preparation: P(]-5,0]) = 0 on Hardy states"));

        double contraction = 0;
        double reduction = 0;
        double monotone = 0;
        std::vector<double> times;
        for (int k = 0; k < 40; ++k) times.push_back(0.25 * k);
        for (int i = 0; i < samples; ++i) {
            const State w = rand.white(desk);
            const double t = rand.uniform(0, 10);
            contraction = std::max(contraction, w_apply(w, t).norm() - 1);
            const State s = i % 2 ? rand.localized(desk) : rand.hardy(desk);
            const double ts = snap_to_lattice(desk, t);
            reduction = std::max(reduction, distance(project_P(evolve(s, ts), 0.0), w_apply(s, ts)));
            const std::vector<double> p = survival_values(s, times);
            probabilities.add(p);
            monotone = std::max(monotone, max_increase(p));
        }
        checks.push_back(check_below("semigroup.contraction", contraction, 1e-12, "||W_t s|| <= ||s||"));
        checks.push_back(check_below("semigroup.reduction", reduction, tol.projection,
                                     "P_0 U_t = P_0 U_t P_0 at lattice t"));
        checks.push_back(check_below("semigroup.survival_monotone", monotone, tol.monotone,
                                     "p(t) nonincreasing for Hardy and non-Hardy states"));

        double eigen = 0;
        double exponential = 0;
        for (cd xi : admissible_poles(desk, cfg)) {
            const double b = -xi.imag();
            const State rho = resonance_state(ResonanceSpec<double>(xi, rand.energy_profile(desk)), desk);
            std::vector<double> ts;
            for (double f : {0.1, 0.5, 1.0, 2.0}) {
                const double t = snap_to_lattice(desk, f / b);
                eigen = std::max(eigen, rel(distance(w_apply(rho, t), std::exp(cd(0, -t) * xi) * rho), rho.norm()));
            }
            for (int k = 0; k <= 25; ++k) ts.push_back(snap_to_lattice(desk, k * 5 / (2 * b) / 25));
            const std::vector<double> p = survival_values(rho.normalized(), ts);
            probabilities.add(p);
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const double ref = std::exp(-2 * b * ts[k]);
                exponential = std::max(exponential, std::abs(p[k] - ref) / ref);
            }
        }
        checks.push_back(check_below("semigroup.eigenvalue", eigen, tol.eigen_residual,
                                     "W_t rho_xi = exp(-i t xi) rho_xi"));
        checks.push_back(check_below("semigroup.survival_exponential", exponential, tol.survival,
                                     "p(t) = exp(-2 |Im xi| t) for resonances"));

        // unstable part of resonance form plus a lower-class component
        double combination = 0;
        const double b = 0.5;
        if (b >= 10 * desk.d_nu() && b <= desk.nu_max() / 50) {
            const State rho = resonance_state(ResonanceSpec<double>(cd(0.7, -b), flat(desk)), desk).normalized();
            const State any = rand.localized(desk);
            const State lower = (any - project_P(any, 0.0)).normalized();
            const State s = (std::sqrt(0.6) * rho + std::sqrt(0.4) * lower).normalized();
            const double weight = project_P(s, 0.0).squared_norm();
            const std::vector<double> ts{0.0, 0.5, 1.0, 2.0, 4.0};
            const std::vector<double> p = survival_values(s, ts);
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const double ref = weight * std::exp(-2 * b * ts[k]);
                combination = std::max(combination, std::abs(p[k] - ref) / ref);
            }
        }
        checks.push_back(check_below("semigroup.linear_combination", combination, tol.survival,
                                     "exponential survival despite a lower-class component"));
    }

    {
        double bound = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < cfg.verify.physical_samples; ++i) {
            const Profile p1{ProfileFamily::gaussian, {rand.uniform(1, 3), rand.uniform(0.1, 0.6)}};
            LambdaKernel<double> m = embed_pure(sample_profile(phys, p1));
            State s = lambda_to_nue(m);
            if (i % 2) {
                const Profile p2{ProfileFamily::gaussian, {rand.uniform(1, 3), rand.uniform(0.1, 0.6)}};
                const double w = rand.uniform(0.2, 0.8);
                m = LambdaKernel<double>(phys, w * m.values() + (1 - w) * embed_pure(sample_profile(phys, p2)).values());
                s = lambda_to_nue(embed_density(m)).normalized();
            }
            bound = std::min(bound, time_stats(s, m).require_product());
        }
        checks.push_back(check_above("uncertainty.bound", bound, 1 / (2 * std::sqrt(2.0)) - tol.uncertainty_slack,
                                     "min Delta E Delta T over physical embeddings"));

        double moments = 0;
        for (cd xi : {cd(0, -0.5), cd(1, -0.2)}) {
            const double b = -xi.imag();
            if (!(b >= 10 * desk.d_nu() && b <= desk.nu_max() / 50)) continue;
            const auto st = time_stats(resonance_state(ResonanceSpec<double>(xi, flat(desk)), desk).normalized());
            moments = std::max(moments, std::abs(st.mean_T + 1 / (2 * b)) * 2 * b);
            moments = std::max(moments, std::abs(st.delta_T - 1 / (2 * b)) * 2 * b);
        }
        checks.push_back(check_below("uncertainty.resonance_moments", moments, tol.moments,
                                     "<T> = -1/(2b), Delta T = 1/(2b) for resonances"));

        const LambdaKernel<double> uniform =
            embed_pure(sample_profile(fine, Profile{ProfileFamily::indicator, {0.0, 1.0}}));
        const double delta_e = energy_moments(uniform).uncertainty();
        checks.push_back(check_below("uncertainty.uniform_delta_e", std::abs(delta_e * std::sqrt(12.0) - 1),
                                     tol.delta_e, "Delta E = 1/sqrt(12) for the uniform profile on [0, 1]"));
    }

    {
        const PureState<double> psi = sample_profile(phys, Profile{ProfileFamily::two_bump, {1.0, 3.0, 0.1}});
        std::vector<double> ts;
        for (int k = 0; k <= 64; ++k) ts.push_back(2 * std::numbers::pi * k / 64);
        const std::vector<double> hp = hilbert_survival(psi, std::span<const double>(ts)).values;
        probabilities.add(hp);
        double revival = 0;
        double running_min = hp.front();
        for (double v : hp) {
            running_min = std::min(running_min, v);
            revival = std::max(revival, v - running_min);
        }
        const std::vector<double> lp = survival_values(lambda_to_nue(embed_pure(psi)), ts);
        probabilities.add(lp);
        checks.push_back(check_above("contrast.hilbert_revival", revival, tol.contrast_margin,
                                     "Hilbert-space survival of a two-bump state revives"));
        checks.push_back(check_below("contrast.liouville_monotone", max_increase(lp), tol.monotone,
                                     "Liouville survival of the same state is monotone"));
    }

    checks.push_back(check_below("cli.probability_range", probabilities.excess(), tol.probability,
                                 "every computed probability lies in [0, 1]"));
    return checks;
}

}  // namespace liouville::cli
