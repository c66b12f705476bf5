#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/liouville.hpp"
#include "liouville/time_op.hpp"

namespace liouville {

/// Pole xi in the open lower half-plane and the energy profile psi(E_m), ||psi||_E = 1.
template <typename Real = double>
class ResonanceSpec {
public:
    ResonanceSpec(Complex<Real> xi, CVector<Real> profile) : xi_(xi), profile_(std::move(profile)) {
        if (!(xi.imag() < 0)) {
            throw PreconditionError("resonance pole must lie in the lower half-plane (Im xi < 0), got Im xi = " +
                                    std::to_string(xi.imag()));
        }
    }

    Complex<Real> xi() const { return xi_; }
    Real decay_rate() const { return -2 * xi_.imag(); }
    const CVector<Real>& profile() const { return profile_; }

private:
    Complex<Real> xi_;
    CVector<Real> profile_;
};

enum class PoleSampling {
    // sum_p (-1)^p / (nu - xi + p L), L = 2 nu_max: the Lorentzian continued
    // antiperiodically across the window, exactly one-sided on the tau lattice.
    image_sum,
    // 1 / (nu - xi) at the samples, truncated at the window edges.
    pointwise,
};

/// The nu-profile of a resonance at sample nu.
template <typename Real>
Complex<Real> pole_profile(const SpectralGrid<Real>& g, Complex<Real> xi, Real nu,
                           PoleSampling sampling = PoleSampling::image_sum) {
    if (sampling == PoleSampling::pointwise) return Real(1) / (Complex<Real>(nu) - xi);
    const Real period = 2 * g.nu_max();
    const Real k = std::numbers::pi_v<Real> / period;
    return k / std::sin(k * (Complex<Real>(nu) - xi));
}

/// rho_xi(nu, E) = psi(E) / (nu - xi), eigenvector of W_t with eigenvalue exp(-i t xi).
///
/// Requires 10 d_nu <= |Im xi| <= nu_max / 50 so that the pole is resolved and its
/// tails fit in the window. Squared norm is close to pi / |Im xi| for a normalized psi.
template <typename Real>
HSState<Real> resonance_state(const ResonanceSpec<Real>& spec, const SpectralGrid<Real>& g,
                              PoleSampling sampling = PoleSampling::image_sum) {
    const Real width = -spec.xi().imag();
    if (width < 10 * g.d_nu()) {
        throw PreconditionError("pole not resolvable: |Im xi| = " + std::to_string(width) +
                                " < 10 d_nu = " + std::to_string(10 * g.d_nu()));
    }
    if (width > g.nu_max() / 50) {
        throw PreconditionError("pole tails not contained: |Im xi| = " + std::to_string(width) +
                                " > nu_max / 50 = " + std::to_string(g.nu_max() / 50));
    }
    if (spec.profile().size() != g.n_e()) {
        throw GridError("resonance profile needs one value per energy sample");
    }
    const Real profile_norm2 = g.d_e() * spec.profile().squaredNorm();
    if (std::abs(profile_norm2 - 1) > Real(1e-8)) {
        throw PreconditionError("resonance profile must be normalized (||psi||^2 = " +
                                std::to_string(profile_norm2) + ")");
    }
    CVector<Real> column(g.n_nu());
    for (Index k = 0; k < g.n_nu(); ++k) column[k] = pole_profile(g, spec.xi(), g.nu(k), sampling);
    return HSState<Real>(g, column * spec.profile().transpose());
}

/// W_t = P_0 U_t P_0, t >= 0.
template <typename Real>
HSState<Real> w_apply(const HSState<Real>& s, Real t) {
    if (!(t >= 0)) throw PreconditionError("the semigroup W_t is defined for t >= 0 only");
    return project_P(evolve(project_P(s, Real(0)), t), Real(0));
}

/// p(t) = ||P_0 exp(-itL) s||^2.
template <typename Real>
TimeSeries<Real> survival(const HSState<Real>& s, std::span<const Real> times) {
    if (std::abs(s.squared_norm() - 1) > Real(1e-8)) {
        throw PreconditionError("survival needs a normalized state");
    }
    require_increasing(times);
    if (!times.empty() && times.front() < 0) {
        throw PreconditionError("survival times must be non-negative");
    }
    const TauCut<Real> cut = tau_cut(s.grid(), Real(0));
    std::vector<Real> values;
    values.reserve(times.size());
    for (Real t : times) {
        const TauState<Real> ts = to_tau(evolve(s, t));
        values.push_back(band_mass(ts, 0, cut.kept));
    }
    return TimeSeries<Real>(std::vector<Real>(times.begin(), times.end()), std::move(values));
}

/// P(]t1, t2], s) = ||P'_{t2} s||^2 - ||P'_{t1} s||^2, the probability that the decay
/// event happens in ]t1, t2]. Equal to the tau-mass of s in ]-t2, -t1].
template <typename Real>
Real decay_window(const HSState<Real>& s, Real t1, Real t2) {
    if (!(t1 < t2)) throw PreconditionError("decay window needs t1 < t2");
    if (std::abs(s.squared_norm() - 1) > Real(1e-8)) {
        throw PreconditionError("decay_window needs a normalized state");
    }
    const TauState<Real> ts = to_tau(s);
    const TauCut<Real> lower = tau_cut(s.grid(), -t2);
    const TauCut<Real> upper = tau_cut(s.grid(), -t1);
    return band_mass(ts, lower.kept, upper.kept);
}

}  // namespace liouville
