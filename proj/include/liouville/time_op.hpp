#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "liouville/grid.hpp"
#include "liouville/liouville.hpp"

namespace liouville {

namespace detail {

// (-1)^k exp(i d_tau nu_k / 2) and the (-1)^(n_nu/2) lattice sign; see to_tau.
template <typename Real>
CVector<Real> tau_twist(const SpectralGrid<Real>& g) {
    CVector<Real> w(g.n_nu());
    const Real half = g.d_tau() / 2;
    for (Index k = 0; k < g.n_nu(); ++k) {
        const Real sign = (k % 2 == 0) ? Real(1) : Real(-1);
        w[k] = sign * std::polar(Real(1), half * g.nu(k));
    }
    return w;
}

template <typename Real>
Real lattice_sign(const SpectralGrid<Real>& g) {
    return ((g.n_nu() / 2) % 2 == 0) ? Real(1) : Real(-1);
}

}  // namespace detail

/// rho-hat(tau_n, E) = (1/sqrt(2 pi)) sum_k exp(+i tau_n nu_k) rho(nu_k, E) d_nu.
///
/// With tau_n on the half-offset lattice the kernel factorizes into an unscaled
/// inverse FFT between two diagonal twists. Unitary between the d_nu d_e and the
/// d_tau d_e weighted norms.
template <typename Real>
TauState<Real> to_tau(const HSState<Real>& s) {
    const auto& g = s.grid();
    const Index n = g.n_nu();
    const CVector<Real> twist = detail::tau_twist(g);
    const Real scale = detail::lattice_sign(g) * g.d_nu() / std::sqrt(2 * std::numbers::pi_v<Real>);
    Eigen::FFT<Real> fft;
    fft.SetFlag(Eigen::FFT<Real>::Unscaled);
    std::vector<Complex<Real>> in(n), out(n);
    CMatrix<Real> result(n, g.n_e());
    for (Index m = 0; m < g.n_e(); ++m) {
        for (Index k = 0; k < n; ++k) in[k] = s(k, m) * twist[k];
        fft.inv(out, in);
        for (Index i = 0; i < n; ++i) {
            result(i, m) = ((i % 2 == 0) ? scale : -scale) * out[i];
        }
    }
    return TauState<Real>(g, std::move(result));
}

/// Exact inverse of to_tau.
template <typename Real>
HSState<Real> from_tau(const TauState<Real>& ts) {
    const auto& g = ts.grid();
    const Index n = g.n_nu();
    const CVector<Real> twist = detail::tau_twist(g);
    const Real scale = detail::lattice_sign(g) * g.d_tau() / std::sqrt(2 * std::numbers::pi_v<Real>);
    Eigen::FFT<Real> fft;
    fft.SetFlag(Eigen::FFT<Real>::Unscaled);
    std::vector<Complex<Real>> in(n), out(n);
    CMatrix<Real> result(n, g.n_e());
    for (Index m = 0; m < g.n_e(); ++m) {
        for (Index i = 0; i < n; ++i) in[i] = (i % 2 == 0) ? ts(i, m) : -ts(i, m);
        fft.fwd(out, in);
        for (Index k = 0; k < n; ++k) result(k, m) = scale * std::conj(twist[k]) * out[k];
    }
    return HSState<Real>(g, std::move(result));
}

/// Nearest multiple of d_tau. Projection cuts and semigroup times live on this lattice,
/// where U_t is an exact translation of the tau samples.
template <typename Real>
Real snap_to_lattice(const SpectralGrid<Real>& g, Real t) {
    return std::round(t / g.d_tau()) * g.d_tau();
}

/// A cut of the tau axis: samples tau_n <= snapped are kept. The snapped cut sits
/// midway between samples.
template <typename Real>
struct TauCut {
    Real requested = 0;
    Real snapped = 0;
    Index kept = 0;  // samples 0..kept-1 are at or below the cut
};

template <typename Real>
TauCut<Real> tau_cut(const SpectralGrid<Real>& g, Real tau) {
    const Index half = g.n_nu() / 2;
    TauCut<Real> cut;
    cut.requested = tau;
    const Real steps = std::round(tau / g.d_tau());
    if (!(steps < static_cast<Real>(half))) {
        cut.kept = g.n_nu();
        cut.snapped = static_cast<Real>(half) * g.d_tau();
    } else if (!(steps > -static_cast<Real>(half))) {
        cut.kept = 0;
        cut.snapped = -static_cast<Real>(half) * g.d_tau();
    } else {
        cut.kept = static_cast<Index>(steps) + half;
        cut.snapped = steps * g.d_tau();
    }
    return cut;
}

/// chi_{]-inf, tau]} applied in the tau representation.
template <typename Real>
TauState<Real> cut_below(const TauState<Real>& ts, const TauCut<Real>& cut) {
    CMatrix<Real> v = ts.values();
    const Index n = ts.grid().n_nu();
    if (cut.kept < n) v.bottomRows(n - cut.kept).setZero();
    return TauState<Real>(ts.grid(), std::move(v));
}

/// Squared norm of the tau samples in [first, last).
template <typename Real>
Real band_mass(const TauState<Real>& ts, Index first, Index last) {
    first = std::clamp<Index>(first, 0, ts.grid().n_nu());
    last = std::clamp<Index>(last, 0, ts.grid().n_nu());
    if (last <= first) return 0;
    return ts.weight() * ts.values().middleRows(first, last - first).squaredNorm();
}

/// P_tau: spectral projection of T onto ]-inf, tau], tau snapped to the lattice.
template <typename Real>
HSState<Real> project_P(const HSState<Real>& s, Real tau) {
    const TauCut<Real> cut = tau_cut(s.grid(), tau);
    if (cut.kept == s.grid().n_nu()) return s;
    if (cut.kept == 0) return HSState<Real>::zero(s.grid());
    return from_tau(cut_below(to_tau(s), cut));
}

/// P'_tau = 1 - P_{-tau}: spectral projections of T' = -T.
template <typename Real>
HSState<Real> project_Pprime(const HSState<Real>& s, Real tau) {
    return s - project_P(s, -tau);
}

/// rho = rho+ + rho-, rho+ = P_0 rho in the upper Hardy class, rho- orthogonal to it.
template <typename Real>
std::pair<HSState<Real>, HSState<Real>> hardy_decompose(const HSState<Real>& s) {
    HSState<Real> plus = project_P(s, Real(0));
    HSState<Real> minus = s - plus;
    return {std::move(plus), std::move(minus)};
}

/// Fraction of the squared norm in the outer 5% of the tau axis.
template <typename Real>
Real tau_edge_fraction(const TauState<Real>& ts) {
    const Real total = ts.values().squaredNorm();
    if (!(total > 0)) return 0;
    const auto& g = ts.grid();
    const Real cut = Real(0.95) * static_cast<Real>(g.n_nu() / 2) * g.d_tau();
    Real edge = 0;
    for (Index n = 0; n < g.n_nu(); ++n) {
        if (std::abs(g.tau(n)) >= cut) edge += ts.values().row(n).squaredNorm();
    }
    return edge / total;
}

using WarningSink = std::function<void(std::string_view)>;

inline WarningSink stderr_warnings() {
    return [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
}

/// T = multiplication by tau in the conjugate representation (i d/dnu on smooth states).
/// Warns through `warn` when boundary mass in nu or tau exceeds 1e-6 of the norm.
template <typename Real>
HSState<Real> apply_T(const HSState<Real>& s, const WarningSink& warn = stderr_warnings()) {
    TauState<Real> ts = to_tau(s);
    const Real nu_edge = boundary_mass(s).nu_edge;
    const Real tau_edge = tau_edge_fraction(ts);
    if (warn && std::max(nu_edge, tau_edge) > Real(1e-6)) {
        warn("apply_T: boundary mass (nu " + std::to_string(nu_edge) + ", tau " +
             std::to_string(tau_edge) + ") exceeds 1e-6; time operator is not faithful");
    }
    const RVector<Real> tau = s.grid().tau_samples();
    CMatrix<Real> v = ts.values().array().colwise() * tau.template cast<Complex<Real>>().array();
    return from_tau(TauState<Real>(s.grid(), std::move(v)));
}

/// <T>, Delta T and, when a density matrix is supplied, Delta E.
template <typename Real>
struct TimeStats {
    Real mean_T = 0;
    Real delta_T = 0;
    std::optional<Real> delta_E;
    std::optional<Real> product;

    Real require_product() const {
        if (!product) {
            throw PreconditionError("energy uncertainty requested without a density matrix");
        }
        return *product;
    }
};

namespace detail {

template <typename Real>
TimeStats<Real> time_moments(const HSState<Real>& s) {
    if (std::abs(s.squared_norm() - 1) > Real(1e-8)) {
        throw PreconditionError("time_stats needs a normalized state (squared norm " +
                                std::to_string(s.squared_norm()) + ")");
    }
    const TauState<Real> ts = to_tau(s);
    const auto& g = s.grid();
    const RVector<Real> density = ts.values().cwiseAbs2().rowwise().sum() * ts.weight();
    Real first = 0;
    Real second = 0;
    for (Index n = 0; n < g.n_nu(); ++n) {
        first += density[n] * g.tau(n);
        second += density[n] * g.tau(n) * g.tau(n);
    }
    TimeStats<Real> out;
    out.mean_T = first;
    out.delta_T = std::sqrt(std::max(second - first * first, Real(0)));
    return out;
}

}  // namespace detail

template <typename Real>
TimeStats<Real> time_stats(const HSState<Real>& s) {
    return detail::time_moments(s);
}

/// Full statistics for the Liouville vector s of the density matrix m (s = M^{1/2}
/// in the spectral representation).
template <typename Real>
TimeStats<Real> time_stats(const HSState<Real>& s, const LambdaKernel<Real>& m) {
    if (!(s.grid() == m.grid())) throw GridError("state and density matrix live on different grids");
    if (m.values().diagonal().real().minCoeff() < Real(-1e-10)) {
        throw PreconditionError("density matrix has a negative diagonal entry");
    }
    const Real trace = m.grid().d_e() * m.values().diagonal().real().sum();
    if (std::abs(trace - 1) > Real(1e-8)) {
        throw PreconditionError("density matrix trace is " + std::to_string(trace) + ", not 1");
    }
    TimeStats<Real> out = detail::time_moments(s);
    out.delta_E = energy_moments(m).uncertainty();
    out.product = out.delta_T * *out.delta_E;
    return out;
}

}  // namespace liouville
