#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "liouville/liouville_time.hpp"
#include "oracles.hpp"

using namespace liouville;
using Grid = SpectralGrid<double>;
using cd = std::complex<double>;

namespace {

const Grid& desk_grid() {
    static const Grid g = build_grid_commensurate(50.0, 16384, 4);
    return g;
}

Eigen::VectorXcd flat_profile(const Grid& g) {
    return Eigen::VectorXcd::Constant(g.n_e(), 1.0 / std::sqrt(g.e_max()));
}

Eigen::VectorXcd random_profile(std::mt19937_64& rng, const Grid& g) {
    Eigen::VectorXcd p = oracle::random_matrix(rng, g.n_e(), 1);
    return p / std::sqrt(p.squaredNorm() * g.d_e());
}

// Finite sum of resonances with distinct poles and random energy profiles.
HSState<double> hardy_state(std::mt19937_64& rng, const Grid& g, int terms = 3) {
    std::uniform_real_distribution<double> re(-5, 5), width(0.2, 1.0), coef(-1, 1);
    HSState<double> s = HSState<double>::zero(g);
    for (int i = 0; i < terms; ++i) {
        const ResonanceSpec<double> spec(cd(re(rng), -width(rng)), random_profile(rng, g));
        s = s + cd(coef(rng), coef(rng)) * resonance_state(spec, g);
    }
    return s.normalized();
}

// Gaussians in nu with random tau offsets of either sign: generally not in the Hardy
// class, and localized in tau well inside the window so that shifts never wrap around.
HSState<double> mixed_state(std::mt19937_64& rng, const Grid& g, int terms = 3) {
    std::uniform_real_distribution<double> center(-5, 5), width(0.4, 2), shift(-20, 20);
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(g.n_nu(), g.n_e());
    for (int t = 0; t < terms; ++t) {
        const double c = center(rng), w = width(rng), sh = shift(rng);
        const Eigen::VectorXcd e_profile = oracle::random_matrix(rng, g.n_e(), 1);
        for (Index k = 0; k < g.n_nu(); ++k) {
            const double x = (g.nu(k) - c) / w;
            v.row(k) += std::exp(-x * x / 2) * std::polar(1.0, -sh * g.nu(k)) * e_profile.transpose();
        }
    }
    return HSState<double>(g, v).normalized();
}

}  // namespace

TEST_CASE("resonance norm approaches pi / b") {
    const Grid& g = desk_grid();
    for (cd xi : {cd(0, -0.5), cd(1, -0.2), cd(2, -1)}) {
        const auto rho = resonance_state(ResonanceSpec<double>(xi, flat_profile(g)), g);
        const double analytic = oracle::lorentzian_mass_quadrature(xi);
        CHECK(std::abs(rho.squared_norm() - analytic) < 1e-2 * analytic);
    }
}

TEST_CASE("resonance construction errors") {
    const Grid& g = desk_grid();
    CHECK_THROWS_AS(ResonanceSpec<double>(cd(1, 0), flat_profile(g)), PreconditionError);
    CHECK_THROWS_AS(ResonanceSpec<double>(cd(1, 0.5), flat_profile(g)), PreconditionError);
    // too narrow for the grid and too wide for the window
    CHECK_THROWS_AS(resonance_state(ResonanceSpec<double>(cd(0, -0.01), flat_profile(g)), g), PreconditionError);
    CHECK_THROWS_AS(resonance_state(ResonanceSpec<double>(cd(0, -2), flat_profile(g)), g), PreconditionError);
    CHECK_THROWS_AS(resonance_state(ResonanceSpec<double>(cd(0, -0.5), 2.0 * flat_profile(g)), g), PreconditionError);
    CHECK(ResonanceSpec<double>(cd(0, -0.5), flat_profile(g)).decay_rate() == 1.0);
}

TEST_CASE("a resonance is an eigenvector of W_t") {
    const Grid& g = desk_grid();
    std::mt19937_64 rng(71);
    for (cd xi : {cd(0, -0.5), cd(1, -0.2), cd(2, -1)}) {
        const double b = -xi.imag();
        const auto rho = resonance_state(ResonanceSpec<double>(xi, random_profile(rng, g)), g);
        for (double f : {0.1, 0.5, 1.0, 2.0}) {
            const double t = snap_to_lattice(g, f / b);
            const auto expected = std::exp(cd(0, -t) * xi) * rho;
            CHECK(distance(w_apply(rho, t), expected) < 1e-2 * rho.norm());
        }
        const auto [plus, minus] = hardy_decompose(rho);
        CHECK(minus.norm() < 1e-3 * rho.norm());
    }
}

TEST_CASE("w_apply basics") {
    const Grid& g = desk_grid();
    std::mt19937_64 rng(73);
    const HSState<double> noise(g, oracle::random_matrix(rng, g.n_nu(), g.n_e()));
    CHECK(distance(w_apply(noise, 0.0), project_P(noise, 0.0)) < 1e-12 * noise.norm());
    CHECK_THROWS_AS(w_apply(noise, -0.1), PreconditionError);
    std::uniform_real_distribution<double> u(0, 10);
    for (int i = 0; i < 5; ++i) {
        CHECK(w_apply(noise, u(rng)).norm() <= noise.norm() + 1e-12);
        // closed dynamics of the projected component
        const auto s = mixed_state(rng, g);
        const double t = snap_to_lattice(g, u(rng));
        CHECK(distance(project_P(evolve(s, t), 0.0), w_apply(s, t)) < 1e-10 * s.norm());
    }
}

TEST_CASE("semigroup law on Hardy states") {
    const Grid& g = desk_grid();
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(0.05, 2);
    for (int trial = 0; trial < 4; ++trial) {
        const auto s = hardy_state(rng, g);
        const double t = snap_to_lattice(g, u(rng));
        const double t2 = snap_to_lattice(g, u(rng));
        CHECK(distance(w_apply(w_apply(s, t), t2), w_apply(s, t + t2)) < 1e-6 * s.norm());
    }
}

TEST_CASE("survival of a resonance is exponential") {
    const Grid& g = desk_grid();
    for (cd xi : {cd(0, -0.5), cd(1, -0.2), cd(2, -1)}) {
        const double b = -xi.imag();
        const auto rho = resonance_state(ResonanceSpec<double>(xi, flat_profile(g)), g).normalized();
        std::vector<double> times;
        for (int i = 0; i <= 25; ++i) times.push_back(snap_to_lattice(g, i * 5 / (2 * b) / 25));
        const auto p = survival(rho, std::span<const double>(times));
        CHECK(p.values.front() == doctest::Approx(1.0).epsilon(1e-10));
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double expected = std::exp(-2 * b * times[i]);
            CHECK(std::abs(p.values[i] - expected) < 1e-2 * expected);
            if (i > 0) CHECK(p.values[i] <= p.values[i - 1] + 1e-10);
        }
    }
}

TEST_CASE("survival off the lattice stays close to the exponential") {
    const Grid& g = desk_grid();
    const auto rho = resonance_state(ResonanceSpec<double>(cd(0, -0.5), flat_profile(g)), g).normalized();
    std::vector<double> times;
    for (int i = 0; i <= 25; ++i) times.push_back(0.2 * i + 0.013);
    const auto p = survival(rho, std::span<const double>(times));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double before = std::floor(times[i] / g.d_tau()) * g.d_tau();
        CHECK(p.values[i] <= std::exp(-before) + 1e-12);
        CHECK(p.values[i] >= std::exp(-(before + g.d_tau())) - 1e-12);
        // the fractional shift rings at the jump during the first couple of tau steps
        if (times[i] >= 2 * g.d_tau()) {
            CHECK(std::abs(p.values[i] - std::exp(-times[i])) < 1e-2 * std::exp(-times[i]));
        }
    }
}

TEST_CASE("survival of a state with a lower-class component") {
    const Grid& g = desk_grid();
    const double b = 0.5;
    const auto rho = resonance_state(ResonanceSpec<double>(cd(0.7, -b), flat_profile(g)), g).normalized();
    // a lower-class component: the mirror image in tau of another resonance
    const auto other = resonance_state(ResonanceSpec<double>(cd(-1.0, -0.4), flat_profile(g)), g).normalized();
    Eigen::MatrixXcd mirrored = to_tau(other).values().colwise().reverse();
    const auto lower = from_tau(TauState<double>(g, mirrored));
    CHECK(project_P(lower, 0.0).norm() < 1e-3);
    const auto s = (std::sqrt(0.6) * rho + std::sqrt(0.4) * lower).normalized();
    const double weight = project_P(s, 0.0).squared_norm();
    std::vector<double> times{0.0, 0.5, 1.0, 2.0, 4.0};
    const auto p = survival(s, std::span<const double>(times));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double expected = weight * std::exp(-2 * b * times[i]);
        CHECK(std::abs(p.values[i] - expected) < 1e-2 * expected);
    }
}

TEST_CASE("survival preconditions and monotonicity for arbitrary states") {
    const Grid g = build_grid_commensurate(20.0, 2048, 4);
    std::mt19937_64 rng(89);
    std::vector<double> times;
    for (int i = 0; i < 40; ++i) times.push_back(0.25 * i);
    for (int trial = 0; trial < 3; ++trial) {
        const auto s = mixed_state(rng, g);
        const auto p = survival(s, std::span<const double>(times));
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(p.values[i] >= 0.0);
            CHECK(p.values[i] <= 1.0 + 1e-10);
            if (i > 0) CHECK(p.values[i] <= p.values[i - 1] + 1e-10);
        }
    }
    const auto s = mixed_state(rng, g);
    std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS(survival(s, std::span<const double>(bad)));
    std::vector<double> negative{-1.0, 0.5};
    CHECK_THROWS_AS(survival(s, std::span<const double>(negative)), PreconditionError);
    CHECK_THROWS_AS(survival(2.0 * s, std::span<const double>(times)), PreconditionError);
}

TEST_CASE("decay window") {
    const Grid& g = desk_grid();
    const double b = 0.5;
    const auto rho = resonance_state(ResonanceSpec<double>(cd(0, -b), flat_profile(g)), g).normalized();
    CHECK(decay_window(rho, -5.0, 0.0) < 1e-10);
    const double whole = (g.n_nu() / 2 + 1) * g.d_tau();
    CHECK(std::abs(decay_window(rho, -whole, whole) - 1) < 1e-10);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(snap_to_lattice(g, 0.5 * i));
    const auto p = survival(rho, std::span<const double>(times));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double window = decay_window(rho, 0.0, times[i]);
        const double expected = 1 - std::exp(-2 * b * times[i]);
        CHECK(std::abs(window - expected) < 1e-2 * expected);
        CHECK(std::abs(window + p.values[i] - 1) < 1e-6);
        CHECK(window >= 0.0);
    }
    CHECK_THROWS_AS(decay_window(rho, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(decay_window(rho, 2.0, 1.0), PreconditionError);
}

TEST_CASE("decay window and survival on random Hardy states") {
    const Grid& g = desk_grid();
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 3; ++trial) {
        const auto s = hardy_state(rng, g);
        CHECK(decay_window(s, -5.0, 0.0) < 1e-10);
        for (double t : {0.3, 1.0, 3.0}) {
            const double ts = snap_to_lattice(g, t);
            std::vector<double> one{ts};
            const double p = survival(s, std::span<const double>(one)).values[0];
            CHECK(std::abs(decay_window(s, 0.0, ts) + p - 1) < 1e-6);
        }
    }
}
