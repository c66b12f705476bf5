#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "liouville/errors.hpp"

namespace liouville {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Uniform discretization of the spectral plane (nu, E) and of the energy half-line.
///
/// nu_k = (k - n_nu/2) d_nu for k = 0..n_nu-1, so nu = 0 is sample n_nu/2.
/// E_m = lambda_m = m d_e for m = 0..n_e-1, with d_e == d_nu (the change of
/// variables (lambda, lambda') -> (nu, E) is then a relabelling of samples).
/// The conjugate time lattice is tau_n = (n - n_nu/2 + 1/2) d_tau with
/// d_tau = 2 pi / (n_nu d_nu); it is symmetric about 0 and never contains 0.
template <typename Real = double>
class SpectralGrid {
public:
    SpectralGrid(Real nu_max, Index n_nu, Real e_max, Index n_e)
        : nu_max_(nu_max), e_max_(e_max), n_nu_(n_nu), n_e_(n_e) {
        if (!(nu_max > 0) || !(e_max > 0) || !std::isfinite(nu_max) || !std::isfinite(e_max)) {
            throw GridError("grid extents nu_max and e_max must be positive and finite");
        }
        if (n_nu < 2 || (n_nu & (n_nu - 1)) != 0) {
            throw GridError("n_nu must be a power of two >= 2, got " + std::to_string(n_nu));
        }
        if (n_e < 1) {
            throw GridError("n_e must be positive");
        }
        const Real d_nu = 2 * nu_max / static_cast<Real>(n_nu);
        const Real d_e = e_max / static_cast<Real>(n_e);
        const Real tol = 64 * std::numeric_limits<Real>::epsilon() * d_nu;
        if (std::abs(d_e - d_nu) > tol) {
            throw GridError("incommensurate grid: e_max/n_e = " + std::to_string(d_e) +
                            " differs from 2 nu_max/n_nu = " + std::to_string(d_nu));
        }
    }

    Real nu_max() const { return nu_max_; }
    Real e_max() const { return e_max_; }
    Index n_nu() const { return n_nu_; }
    Index n_e() const { return n_e_; }

    Real d_nu() const { return 2 * nu_max_ / static_cast<Real>(n_nu_); }
    Real d_e() const { return d_nu(); }
    Real d_tau() const { return std::numbers::pi_v<Real> / nu_max_; }

    Index nu_zero_index() const { return n_nu_ / 2; }
    Real nu(Index k) const { return static_cast<Real>(k - n_nu_ / 2) * d_nu(); }
    Real e(Index m) const { return static_cast<Real>(m) * d_e(); }
    Real lambda(Index j) const { return e(j); }
    Real tau(Index n) const { return (static_cast<Real>(n - n_nu_ / 2) + Real(0.5)) * d_tau(); }

    RVector<Real> nu_samples() const {
        RVector<Real> v(n_nu_);
        for (Index k = 0; k < n_nu_; ++k) v[k] = nu(k);
        return v;
    }
    RVector<Real> e_samples() const {
        RVector<Real> v(n_e_);
        for (Index m = 0; m < n_e_; ++m) v[m] = e(m);
        return v;
    }
    RVector<Real> tau_samples() const {
        RVector<Real> v(n_nu_);
        for (Index n = 0; n < n_nu_; ++n) v[n] = tau(n);
        return v;
    }

    friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
        return a.nu_max_ == b.nu_max_ && a.e_max_ == b.e_max_ && a.n_nu_ == b.n_nu_ &&
               a.n_e_ == b.n_e_;
    }

private:
    Real nu_max_;
    Real e_max_;
    Index n_nu_;
    Index n_e_;
};

template <typename Real>
SpectralGrid<Real> build_grid(Real nu_max, Index n_nu, Real e_max, Index n_e) {
    return SpectralGrid<Real>(nu_max, n_nu, e_max, n_e);
}

/// Grid whose E axis is as long as n_e commensurate samples allow.
template <typename Real>
SpectralGrid<Real> build_grid_commensurate(Real nu_max, Index n_nu, Index n_e) {
    const Real d = 2 * nu_max / static_cast<Real>(n_nu);
    return SpectralGrid<Real>(nu_max, n_nu, d * static_cast<Real>(n_e), n_e);
}

// Representation tags: shape and quadrature weight of the sampled matrix.
struct SpectralRep {
    static constexpr const char* name = "spectral (nu, E)";
    template <typename Real>
    static Index rows(const SpectralGrid<Real>& g) { return g.n_nu(); }
    template <typename Real>
    static Index cols(const SpectralGrid<Real>& g) { return g.n_e(); }
    template <typename Real>
    static Real weight(const SpectralGrid<Real>& g) { return g.d_nu() * g.d_e(); }
};

struct TauRep {
    static constexpr const char* name = "time (tau, E)";
    template <typename Real>
    static Index rows(const SpectralGrid<Real>& g) { return g.n_nu(); }
    template <typename Real>
    static Index cols(const SpectralGrid<Real>& g) { return g.n_e(); }
    template <typename Real>
    static Real weight(const SpectralGrid<Real>& g) { return g.d_tau() * g.d_e(); }
};

struct KernelRep {
    static constexpr const char* name = "kernel (lambda, lambda')";
    template <typename Real>
    static Index rows(const SpectralGrid<Real>& g) { return g.n_e(); }
    template <typename Real>
    static Index cols(const SpectralGrid<Real>& g) { return g.n_e(); }
    template <typename Real>
    static Real weight(const SpectralGrid<Real>& g) { return g.d_e() * g.d_e(); }
};

/// Complex samples of a Hilbert-Schmidt element in one representation.
/// Immutable; arithmetic returns new values.
template <typename Real, typename Rep>
class SampledField {
public:
    using Scalar = Complex<Real>;
    using Matrix = CMatrix<Real>;
    using Grid = SpectralGrid<Real>;

    explicit SampledField(const Grid& grid)
        : grid_(grid), values_(Matrix::Zero(Rep::rows(grid), Rep::cols(grid))) {}

    SampledField(const Grid& grid, Matrix values) : grid_(grid), values_(std::move(values)) {
        if (values_.rows() != Rep::rows(grid) || values_.cols() != Rep::cols(grid)) {
            throw GridError(std::string("sample matrix shape does not match the grid for ") +
                            Rep::name);
        }
    }

    static SampledField zero(const Grid& grid) { return SampledField(grid); }

    const Grid& grid() const { return grid_; }
    const Matrix& values() const { return values_; }
    Scalar operator()(Index r, Index c) const { return values_(r, c); }

    Real weight() const { return Rep::weight(grid_); }
    Real squared_norm() const { return weight() * values_.squaredNorm(); }
    Real norm() const { return std::sqrt(squared_norm()); }

    SampledField normalized() const {
        const Real n = norm();
        if (!(n > 0)) throw PreconditionError("cannot normalize a zero state");
        return SampledField(grid_, values_ / n);
    }

    friend SampledField operator+(const SampledField& a, const SampledField& b) {
        a.require_same_grid(b);
        return SampledField(a.grid_, a.values_ + b.values_);
    }
    friend SampledField operator-(const SampledField& a, const SampledField& b) {
        a.require_same_grid(b);
        return SampledField(a.grid_, a.values_ - b.values_);
    }
    friend SampledField operator*(Scalar c, const SampledField& a) {
        return SampledField(a.grid_, c * a.values_);
    }
    friend SampledField operator*(const SampledField& a, Scalar c) { return c * a; }

    void require_same_grid(const SampledField& other) const {
        if (!(grid_ == other.grid_)) throw GridError("operands live on different grids");
    }

private:
    Grid grid_;
    Matrix values_;
};

/// rho(nu, E): rows nu_k, columns E_m.
template <typename Real = double>
using HSState = SampledField<Real, SpectralRep>;
/// rho-hat(tau, E): rows tau_n, columns E_m.
template <typename Real = double>
using TauState = SampledField<Real, TauRep>;
/// rho(lambda, lambda'), also used for density matrices M.
template <typename Real = double>
using LambdaKernel = SampledField<Real, KernelRep>;

/// Inner product <a, b>, conjugate-linear in a, with the representation's weight.
template <typename Real, typename Rep>
Complex<Real> inner(const SampledField<Real, Rep>& a, const SampledField<Real, Rep>& b) {
    a.require_same_grid(b);
    return a.weight() * a.values().conjugate().cwiseProduct(b.values()).sum();
}

template <typename Real, typename Rep>
Real norm(const SampledField<Real, Rep>& a) {
    return a.norm();
}

template <typename Real, typename Rep>
Real distance(const SampledField<Real, Rep>& a, const SampledField<Real, Rep>& b) {
    a.require_same_grid(b);
    return std::sqrt(a.weight() * (a.values() - b.values()).squaredNorm());
}

/// Fraction of the squared norm in the outer 5% of each axis.
template <typename Real>
struct BoundaryMass {
    Real nu_edge = 0;  // |nu| >= 0.95 nu_max
    Real e_edge = 0;   // E >= 0.95 e_max
    Real worst() const { return std::max(nu_edge, e_edge); }
};

template <typename Real>
BoundaryMass<Real> boundary_mass(const HSState<Real>& s) {
    const auto& g = s.grid();
    const Real total = s.values().squaredNorm();
    BoundaryMass<Real> out;
    if (!(total > 0)) return out;
    const Real nu_cut = Real(0.95) * g.nu_max();
    const Real e_cut = Real(0.95) * g.e_max();
    Real nu_edge = 0;
    Real e_edge = 0;
    for (Index m = 0; m < g.n_e(); ++m) {
        for (Index k = 0; k < g.n_nu(); ++k) {
            const Real w = std::norm(s(k, m));
            if (std::abs(g.nu(k)) >= nu_cut) nu_edge += w;
            if (g.e(m) >= e_cut) e_edge += w;
        }
    }
    out.nu_edge = nu_edge / total;
    out.e_edge = e_edge / total;
    return out;
}

/// (lambda, lambda') -> (nu, E) = (lambda - lambda', max(lambda, lambda')).
///
/// Inverse branches: nu >= 0 reads k(E, E - nu), nu < 0 reads k(E + nu, E).
/// Kernel entries whose |lambda - lambda'| exceeds the nu window are dropped.
template <typename Real>
HSState<Real> lambda_to_nue(const LambdaKernel<Real>& k) {
    const auto& g = k.grid();
    const Index n_e = g.n_e();
    const Index zero = g.nu_zero_index();
    CMatrix<Real> out = CMatrix<Real>::Zero(g.n_nu(), n_e);
    for (Index k_nu = 0; k_nu < g.n_nu(); ++k_nu) {
        const Index j = k_nu - zero;  // nu = j d_nu
        if (j >= n_e || -j >= n_e) continue;
        if (j >= 0) {
            for (Index m = j; m < n_e; ++m) out(k_nu, m) = k(m, m - j);
        } else {
            for (Index m = -j; m < n_e; ++m) out(k_nu, m) = k(m + j, m);
        }
    }
    return HSState<Real>(g, std::move(out));
}

/// Squared-norm fraction of s in the unphysical region E < |nu|.
template <typename Real>
Real unphysical_fraction(const HSState<Real>& s) {
    const auto& g = s.grid();
    const Real total = s.values().squaredNorm();
    if (!(total > 0)) return 0;
    const Index zero = g.nu_zero_index();
    Real bad = 0;
    for (Index m = 0; m < g.n_e(); ++m) {
        for (Index k = 0; k < g.n_nu(); ++k) {
            const Index j = k - zero;
            if (m < (j < 0 ? -j : j)) bad += std::norm(s(k, m));
        }
    }
    return bad / total;
}

/// Inverse of lambda_to_nue. Throws UnphysicalSupport when the mass of s in
/// E < |nu| exceeds `tolerance` times its norm.
template <typename Real>
LambdaKernel<Real> nue_to_lambda(const HSState<Real>& s, Real tolerance = Real(1e-10)) {
    const Real bad = std::sqrt(unphysical_fraction(s));
    if (bad > tolerance) {
        throw UnphysicalSupport("state has " + std::to_string(bad) +
                                " of its norm in E < |nu|; no kernel on the half-line exists");
    }
    const auto& g = s.grid();
    const Index n_e = g.n_e();
    const Index zero = g.nu_zero_index();
    CMatrix<Real> out = CMatrix<Real>::Zero(n_e, n_e);
    for (Index i = 0; i < n_e; ++i) {
        for (Index jj = 0; jj < n_e; ++jj) {
            const Index j = i - jj;  // nu index offset
            if (j >= zero || -j > zero) continue;
            const Index m = std::max(i, jj);
            out(i, jj) = s(zero + j, m);
        }
    }
    return LambdaKernel<Real>(g, std::move(out));
}

}  // namespace liouville
