#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "liouville/grid.hpp"

namespace liouville {

/// Wave function psi(lambda_j) on the energy half-line.
template <typename Real = double>
class PureState {
public:
    PureState(const SpectralGrid<Real>& grid, CVector<Real> amplitudes)
        : grid_(grid), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != grid.n_e()) {
            throw GridError("pure state needs one amplitude per energy sample");
        }
    }

    const SpectralGrid<Real>& grid() const { return grid_; }
    const CVector<Real>& amplitudes() const { return amplitudes_; }

    Real squared_norm() const { return grid_.d_e() * amplitudes_.squaredNorm(); }
    bool is_normalized(Real tol = Real(1e-8)) const { return std::abs(squared_norm() - 1) <= tol; }

    PureState normalized() const {
        const Real n2 = squared_norm();
        if (!(n2 > 0)) throw PreconditionError("cannot normalize a zero wave function");
        return PureState(grid_, amplitudes_ / std::sqrt(n2));
    }

private:
    SpectralGrid<Real> grid_;
    CVector<Real> amplitudes_;
};

/// Sampled scalar observable over time (hbar = 1).
template <typename Real = double>
struct TimeSeries {
    std::vector<Real> times;
    std::vector<Real> values;

    TimeSeries() = default;
    TimeSeries(std::vector<Real> t, std::vector<Real> v) : times(std::move(t)), values(std::move(v)) {
        if (times.size() != values.size()) {
            throw PreconditionError("time series needs one value per time");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw PreconditionError("time series times must be strictly increasing");
            }
        }
        for (Real v : values) {
            if (!std::isfinite(v)) throw PreconditionError("time series value is not finite");
        }
    }

    std::size_t size() const { return times.size(); }
};

template <typename Real>
void require_increasing(std::span<const Real> times) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw PreconditionError("times must be strictly increasing");
        }
    }
}

/// rho = |psi><psi|, kernel psi(lambda) conj(psi(lambda')).
template <typename Real>
LambdaKernel<Real> embed_pure(const PureState<Real>& psi) {
    if (!psi.is_normalized()) {
        throw PreconditionError("embed_pure needs a normalized wave function");
    }
    const auto& a = psi.amplitudes();
    return LambdaKernel<Real>(psi.grid(), a * a.adjoint());
}

/// rho = M^{1/2} in the quadrature-weighted operator sense.
///
/// The discretized operator of a kernel m is A = m d_e (kernel composition is
/// (a b)(l, l'') = sum_j a(l, l_j) b(l_j, l'') d_e). A is diagonalized, eigenvalues
/// below 1e-12 are set to zero, and rho = U sqrt(D) U^* / d_e, so that rho composed
/// with itself reproduces m.
template <typename Real>
LambdaKernel<Real> embed_density(const LambdaKernel<Real>& m) {
    const auto& g = m.grid();
    const Real d_e = g.d_e();
    const CMatrix<Real>& v = m.values();
    const Real scale = std::max(v.cwiseAbs().maxCoeff(), Real(1));
    if ((v - v.adjoint()).cwiseAbs().maxCoeff() > Real(1e-10) * scale) {
        throw PreconditionError("density matrix is not Hermitian");
    }
    const Real trace = d_e * v.diagonal().real().sum();
    if (std::abs(trace - 1) > Real(1e-8)) {
        throw PreconditionError("density matrix trace is " + std::to_string(trace) + ", not 1");
    }
    const CMatrix<Real> weighted = (v + v.adjoint()) * (d_e / 2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(weighted);
    if (eig.info() != Eigen::Success) {
        throw PreconditionError("eigendecomposition of the density matrix failed");
    }
    RVector<Real> lambdas = eig.eigenvalues();
    if (lambdas.minCoeff() < Real(-1e-10)) {
        throw PreconditionError("density matrix is not positive semidefinite (eigenvalue " +
                                std::to_string(lambdas.minCoeff()) + ")");
    }
    for (Index i = 0; i < lambdas.size(); ++i) {
        lambdas[i] = lambdas[i] < Real(1e-12) ? Real(0) : std::sqrt(lambdas[i]);
    }
    const CMatrix<Real>& u = eig.eigenvectors();
    CMatrix<Real> root = u * lambdas.template cast<Complex<Real>>().asDiagonal() * u.adjoint();
    return LambdaKernel<Real>(g, root / d_e);
}

/// Composition of kernels as integral operators.
template <typename Real>
LambdaKernel<Real> compose(const LambdaKernel<Real>& a, const LambdaKernel<Real>& b) {
    a.require_same_grid(b);
    return LambdaKernel<Real>(a.grid(), (a.values() * b.values()) * a.grid().d_e());
}

/// Samples A(lambda_j) of a multiplication observable.
template <typename Real, typename F>
RVector<Real> sample_observable(const SpectralGrid<Real>& g, F&& f) {
    RVector<Real> a(g.n_e());
    for (Index j = 0; j < g.n_e(); ++j) a[j] = f(g.lambda(j));
    return a;
}

/// <rho, A-hat rho> where A-hat multiplies the kernel by A(lambda) on the left.
template <typename Real>
Real expectation(const LambdaKernel<Real>& rho, const RVector<Real>& observable) {
    if (observable.size() != rho.grid().n_e()) {
        throw GridError("observable must be sampled on the energy grid");
    }
    const RVector<Real> row_weights = rho.values().cwiseAbs2().rowwise().sum();
    return rho.weight() * row_weights.dot(observable);
}

/// Energy moments Tr(M H), Tr(M H^2) of a density matrix on the lambda grid.
template <typename Real>
struct EnergyMoments {
    Real mean = 0;
    Real second = 0;
    Real uncertainty() const { return std::sqrt(std::max(second - mean * mean, Real(0))); }
};

template <typename Real>
EnergyMoments<Real> energy_moments(const LambdaKernel<Real>& m) {
    const auto& g = m.grid();
    EnergyMoments<Real> out;
    for (Index j = 0; j < g.n_e(); ++j) {
        const Real p = g.d_e() * std::real(m(j, j));
        out.mean += p * g.lambda(j);
        out.second += p * g.lambda(j) * g.lambda(j);
    }
    return out;
}

/// L rho(nu, E) = nu rho(nu, E).
template <typename Real>
HSState<Real> apply_L(const HSState<Real>& s) {
    const RVector<Real> nu = s.grid().nu_samples();
    CMatrix<Real> out = s.values().array().colwise() * nu.template cast<Complex<Real>>().array();
    return HSState<Real>(s.grid(), std::move(out));
}

/// U_t rho = exp(-i t L) rho, a pointwise phase exp(-i t nu).
template <typename Real>
HSState<Real> evolve(const HSState<Real>& s, Real t) {
    const auto& g = s.grid();
    CVector<Real> phase(g.n_nu());
    for (Index k = 0; k < g.n_nu(); ++k) phase[k] = std::polar(Real(1), -t * g.nu(k));
    CMatrix<Real> out = s.values().array().colwise() * phase.array();
    return HSState<Real>(g, std::move(out));
}

/// p(t) = |<psi, exp(-itH) psi>|^2 for the rank-one projection onto psi.
template <typename Real>
TimeSeries<Real> hilbert_survival(const PureState<Real>& psi, std::span<const Real> times) {
    if (!psi.is_normalized()) {
        throw PreconditionError("hilbert_survival needs a normalized wave function");
    }
    require_increasing(times);
    const auto& g = psi.grid();
    const RVector<Real> density = psi.amplitudes().cwiseAbs2() * g.d_e();
    std::vector<Real> values;
    values.reserve(times.size());
    for (Real t : times) {
        Complex<Real> overlap(0);
        for (Index j = 0; j < g.n_e(); ++j) {
            overlap += density[j] * std::polar(Real(1), -t * g.lambda(j));
        }
        values.push_back(std::min(std::norm(overlap), Real(1)));
    }
    return TimeSeries<Real>(std::vector<Real>(times.begin(), times.end()), std::move(values));
}

}  // namespace liouville
