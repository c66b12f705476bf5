// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "liouville/liouville_time.hpp"
#include "oracles.hpp"

using namespace liouville;
using Grid = SpectralGrid<double>;
using State = HSState<double>;
using cd = std::complex<double>;

namespace {

struct Outcome {
    bool pass;
    double measured;
    double tolerance;
    std::string detail;
};

Outcome below(double measured, double tolerance, std::string detail) {
    return {measured <= tolerance, measured, tolerance, std::move(detail)};
}

const Grid& desk() {
    static const Grid g = build_grid_commensurate(50.0, 16384, 4);
    return g;
}

const std::vector<cd>& poles() {
    static const std::vector<cd> p{cd(0, -0.5), cd(1, -0.2), cd(2, -1)};
    return p;
}

std::mt19937_64& rng() {
    static std::mt19937_64 r(20240601);
    return r;
}

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

Eigen::VectorXcd random_profile(const Grid& g) {
    Eigen::VectorXcd p = oracle::random_matrix(rng(), g.n_e(), 1);
    return p / std::sqrt(p.squaredNorm() * g.d_e());
}

State hardy_state(const Grid& g) {
    State s = State::zero(g);
    for (int i = 0; i < 3; ++i) {
        const ResonanceSpec<double> spec(cd(uniform(-5, 5), -uniform(0.2, 1.0)), random_profile(g));
        s = s + cd(uniform(-1, 1), uniform(-1, 1)) * resonance_state(spec, g);
    }
    return s.normalized();
}

// Gaussians in nu with tau offsets of either sign: not in the Hardy class in general.
State mixed_state(const Grid& g) {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(g.n_nu(), g.n_e());
    for (int t = 0; t < 3; ++t) {
        const double c = uniform(-5, 5), w = uniform(0.4, 2), sh = uniform(-20, 20);
        const Eigen::VectorXcd e = oracle::random_matrix(rng(), g.n_e(), 1);
        for (Index k = 0; k < g.n_nu(); ++k) {
            const double x = (g.nu(k) - c) / w;
            v.row(k) += std::exp(-x * x / 2) * std::polar(1.0, -sh * g.nu(k)) * e.transpose();
        }
    }
    return State(g, v).normalized();
}

State compact_state(const Grid& g) {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(g.n_nu(), g.n_e());
    for (int t = 0; t < 3; ++t) {
        const double c = uniform(-6, 6), w = uniform(1.5, 4), ph = uniform(-3, 3);
        const Eigen::VectorXcd e = oracle::random_matrix(rng(), g.n_e(), 1);
        for (Index k = 0; k < g.n_nu(); ++k) {
            const double b = oracle::bump(g.nu(k), c, w);
            if (b != 0) v.row(k) += b * std::polar(1.0, ph * g.nu(k)) * e.transpose();
        }
    }
    return State(g, v).normalized();
}

Eigen::VectorXcd flat(const Grid& g) { return Eigen::VectorXcd::Constant(g.n_e(), 1.0 / std::sqrt(g.e_max())); }

std::vector<double> survival_at(const State& s, const std::vector<double>& times) {
    return survival(s, std::span<const double>(times)).values;
}

Outcome eigenvalue_relation() {
    const Grid& g = desk();
    double worst = 0;
    for (cd xi : poles()) {
        const double b = -xi.imag();
        const State rho = resonance_state(ResonanceSpec<double>(xi, random_profile(g)), g);
        for (double f : {0.1, 0.5, 1.0, 2.0}) {
            const double t = snap_to_lattice(g, f / b);
            const State expected = std::exp(cd(0, -t) * xi) * rho;
            worst = std::max(worst, distance(w_apply(rho, t), expected) / rho.norm());
        }
    }
    return below(worst, 1e-2, "max_xi,t ||W_t rho - exp(-i t xi) rho|| / ||rho||");
}

Outcome exponential_survival() {
    const Grid& g = desk();
    double worst = 0;
    for (cd xi : poles()) {
        const double b = -xi.imag();
        const State rho = resonance_state(ResonanceSpec<double>(xi, random_profile(g)), g).normalized();
        std::vector<double> times;
        for (int k = 0; k <= 25; ++k) times.push_back(snap_to_lattice(g, k * 5 / (2 * b) / 25));
        const auto p = survival_at(rho, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double ref = std::exp(-2 * b * times[k]);
            worst = std::max(worst, std::abs(p[k] - ref) / ref);
        }
    }
    return below(worst, 1e-2, "max relative deviation from exp(-2 b t), t in [0, 5/(2b)]");
}

Outcome semigroup_law() {
    const Grid& g = desk();
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const State s = hardy_state(g);
        const double t = std::max(snap_to_lattice(g, uniform(0, 2)), g.d_tau());
        const double t2 = std::max(snap_to_lattice(g, uniform(0, 2)), g.d_tau());
        worst = std::max(worst, distance(w_apply(w_apply(s, t), t2), w_apply(s, t + t2)) / s.norm());
    }
    return below(worst, 1e-6, "20 Hardy states, ||W_t' W_t s - W_(t+t') s|| / ||s||");
}

Outcome contraction_and_monotonicity() {
    const Grid& g = desk();
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) times.push_back(snap_to_lattice(g, 0.25 * k));
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const State s = i % 2 ? mixed_state(g) : hardy_state(g);
        const auto p = survival_at(s, times);
        double previous_norm = s.norm();
        for (std::size_t k = 1; k < times.size(); ++k) {
            worst = std::max(worst, p[k] - p[k - 1]);
            const double n = w_apply(s, times[k]).norm();
            worst = std::max(worst, n - previous_norm);
            previous_norm = n;
        }
    }
    return below(worst, 1e-10, "largest increase of ||W_t s|| or p(t), 10 Hardy + 10 non-Hardy states");
}

Outcome projection_algebra() {
    const Grid& g = desk();
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        const State s = mixed_state(g);
        const State r = State(g, oracle::random_matrix(rng(), g.n_nu(), g.n_e())).normalized();
        const double tau = uniform(-30, 30);
        const double tau2 = tau + uniform(0, 30);
        for (const State* x : {&s, &r}) {
            const State px = project_P(*x, tau);
            worst = std::max(worst, distance(project_P(px, tau), px));
            worst = std::max(worst, distance(project_P(project_P(*x, tau2), tau), px));
        }
        worst = std::max(worst, std::abs(inner(project_P(s, tau), r) - inner(s, project_P(r, tau))));
        const double t = snap_to_lattice(g, uniform(-10, 10));
        worst = std::max(worst, distance(evolve(project_P(evolve(s, -t), tau), t), project_P(s, tau + t)));
    }
    return below(worst, 1e-10, "idempotence, self-adjointness, nesting, intertwining at lattice t");
}

Outcome hardy_decomposition() {
    const Grid& g = desk();
    double split = 0;
    for (int i = 0; i < 10; ++i) {
        const State s = i % 2 ? mixed_state(g) : State(g, oracle::random_matrix(rng(), g.n_nu(), g.n_e()));
        const auto [plus, minus] = hardy_decompose(s);
        const double n2 = s.squared_norm();
        split = std::max(split, std::abs(inner(plus, minus)) / n2);
        split = std::max(split, std::abs(plus.squared_norm() + minus.squared_norm() - n2) / n2);
    }
    double leak = 0;
    for (cd xi : poles()) {
        const State rho = resonance_state(ResonanceSpec<double>(xi, random_profile(g)), g);
        leak = std::max(leak, hardy_decompose(rho).second.norm() / rho.norm());
    }
    Outcome o = below(split, 1e-10, "orthogonality and Pythagoras relative to ||rho||^2");
    o.detail += "; resonance lower-class fraction " + std::to_string(leak) + " (< 1e-3)";
    o.pass = o.pass && leak < 1e-3;
    return o;
}

Outcome commutation_and_weyl() {
    const Grid& g = desk();
    double worst = 0;
    int warnings = 0;
    const WarningSink sink = [&](std::string_view) { ++warnings; };
    for (int i = 0; i < 6; ++i) {
        const State b = compact_state(g);
        const State tl = apply_T(apply_L(b), sink);
        const State lt = apply_L(apply_T(b, sink));
        worst = std::max(worst, distance(tl - lt, cd(0, 1) * b) / b.norm());
        for (double t : {uniform(-4, 4), uniform(-4, 4)}) {
            const State expected = apply_T(b, sink) + cd(t) * b;
            worst = std::max(worst, distance(evolve(apply_T(evolve(b, t), sink), -t), expected) / expected.norm());
        }
    }
    Outcome o = below(worst, 1e-6, "||(TL - LT - i) s|| and Weyl defect on smooth compact states");
    if (warnings) {
        o.pass = false;
        o.detail += "; boundary warnings raised";
    }
    return o;
}

Outcome uncertainty() {
    const Grid phys = build_grid(8.0, 1024, 8.0, 512);
    double smallest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
        const Profile p1{ProfileFamily::gaussian, {uniform(1, 3), uniform(0.1, 0.6)}};
        LambdaKernel<double> m = embed_pure(sample_profile(phys, p1));
        State s = lambda_to_nue(m);
        if (i % 2) {
            const Profile p2{ProfileFamily::gaussian, {uniform(1, 3), uniform(0.1, 0.6)}};
            const double w = uniform(0.2, 0.8);
            m = LambdaKernel<double>(phys, w * m.values() + (1 - w) * embed_pure(sample_profile(phys, p2)).values());
            s = lambda_to_nue(embed_density(m)).normalized();
        }
        smallest = std::min(smallest, time_stats(s, m).require_product());
    }
    const double bound = 1 / (2 * std::sqrt(2.0)) - 0.01;

    double moments = 0;
    for (cd xi : {cd(0, -0.5), cd(1, -0.2)}) {
        const double b = -xi.imag();
        const auto st = time_stats(resonance_state(ResonanceSpec<double>(xi, flat(desk())), desk()).normalized());
        moments = std::max({moments, std::abs(st.mean_T + 1 / (2 * b)) * 2 * b,
                            std::abs(st.delta_T - 1 / (2 * b)) * 2 * b});
    }

    const Grid fine = build_grid(2.0, 4096, 1.0, 1024);
    const auto m = embed_pure(sample_profile(fine, Profile{ProfileFamily::indicator, {0.0, 1.0}}));
    const double delta_e = *time_stats(lambda_to_nue(m), m).delta_E;
    const double delta_e_err = std::abs(delta_e - 1 / std::sqrt(12.0));

    Outcome o{smallest >= bound && moments < 1e-3 && delta_e_err < 1e-6, smallest, bound,
              "min Delta E Delta T over 50 embeddings (>= tolerance); resonance moment error " +
                  std::to_string(moments) + " (< 1e-3); |Delta E - 1/sqrt 12| = " + std::to_string(delta_e_err) +
                  " (< 1e-6)"};
    return o;
}

Outcome complementarity() {
    const Grid& g = desk();
    double worst = 0;
    double past = 0;
    for (int i = 0; i < 10; ++i) {
        const State s = hardy_state(g);
        std::vector<double> times;
        for (int k = 1; k <= 8; ++k) times.push_back(snap_to_lattice(g, 0.5 * k));
        const auto p = survival_at(s, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            worst = std::max(worst, std::abs(decay_window(s, 0.0, times[k]) + p[k] - 1));
        }
        past = std::max({past, decay_window(s, -5.0, 0.0), decay_window(s, -uniform(5, 50), -uniform(0, 5))});
    }
    Outcome o = below(worst, 1e-6, "|P(]0,t]) + p(t) - 1| on Hardy states");
    o.detail += "; negative-interval mass " + std::to_string(past) + " (< 1e-10)";
    o.pass = o.pass && past < 1e-10;
    return o;
}

Outcome hilbert_contrast() {
    const Grid phys = build_grid(8.0, 1024, 8.0, 512);
    const double w = 0.1;
    const PureState<double> psi = sample_profile(phys, Profile{ProfileFamily::two_bump, {1.0, 3.0, w}});
    std::vector<double> times;
    for (int k = 0; k <= 64; ++k) times.push_back(2 * std::numbers::pi * k / 64);
    const auto hp = hilbert_survival(psi, std::span<const double>(times)).values;
    // |psi|^2 is two gaussians of variance w^2 / 2 at 1 and 3: p(t) = exp(-w^2 t^2 / 2) cos^2 t
    double oracle_err = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        oracle_err = std::max(oracle_err, std::abs(hp[k] - std::exp(-w * w * t * t / 2) * std::cos(t) * std::cos(t)));
    }
    double margin = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = i + 1; j < times.size(); ++j) margin = std::max(margin, hp[j] - hp[i]);
    const auto lp = survival_at(lambda_to_nue(embed_pure(psi)), times);
    double increase = 0;
    for (std::size_t k = 1; k < lp.size(); ++k) increase = std::max(increase, lp[k] - lp[k - 1]);
    Outcome o{margin > 0.1 && increase <= 1e-10 && oracle_err < 1e-6, margin, 0.1,
              "max p(t2) - p(t1), t1 < t2, Hilbert survival (> tolerance); Liouville increase " +
                  std::to_string(increase) + " (<= 1e-10); closed-form deviation " + std::to_string(oracle_err)};
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"eigenvalue relation", eigenvalue_relation},
        {"pure exponential survival", exponential_survival},
        {"semigroup law", semigroup_law},
        {"contraction and monotonicity", contraction_and_monotonicity},
        {"projection algebra", projection_algebra},
        {"Hardy decomposition", hardy_decomposition},
        {"commutation and Weyl relation", commutation_and_weyl},
        {"uncertainty bound", uncertainty},
        {"complementarity", complementarity},
        {"Hilbert-space contrast", hilbert_contrast},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::numeric_limits<double>::quiet_NaN(), 0, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %2zu %s  measured=%.3e tolerance=%.3e  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                    o.measured, o.tolerance, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures ? 1 : 0;
}
