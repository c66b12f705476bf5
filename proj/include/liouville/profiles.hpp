#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/liouville.hpp"

namespace liouville {

enum class ProfileFamily { indicator, gaussian, two_bump, exponential };

/// Named wave-function family on the energy half-line.
///   indicator(a, b)           chi_[a, b)
///   gaussian(center, width)   exp(-(l - center)^2 / (2 width^2))
///   two_bump(c1, c2, width)   equal-weight sum of two gaussians
///   exponential(rate)         exp(-rate l)
struct Profile {
    ProfileFamily family = ProfileFamily::gaussian;
    std::vector<double> params;
};

inline std::size_t profile_arity(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::indicator: return 2;
        case ProfileFamily::gaussian: return 2;
        case ProfileFamily::two_bump: return 3;
        case ProfileFamily::exponential: return 1;
    }
    return 0;
}

inline const char* profile_name(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::indicator: return "indicator";
        case ProfileFamily::gaussian: return "gaussian";
        case ProfileFamily::two_bump: return "two_bump";
        case ProfileFamily::exponential: return "exponential";
    }
    return "?";
}

inline double profile_value(const Profile& p, double l) {
    const auto& a = p.params;
    auto bump = [](double x, double c, double w) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); };
    switch (p.family) {
        case ProfileFamily::indicator: return (l >= a[0] && l < a[1]) ? 1.0 : 0.0;
        case ProfileFamily::gaussian: return bump(l, a[0], a[1]);
        case ProfileFamily::two_bump: return bump(l, a[0], a[2]) + bump(l, a[1], a[2]);
        case ProfileFamily::exponential: return std::exp(-a[0] * l);
    }
    return 0.0;
}

inline void validate_profile(const Profile& p) {
    if (p.params.size() != profile_arity(p.family)) {
        throw PreconditionError(std::string(profile_name(p.family)) + " profile takes " +
                                std::to_string(profile_arity(p.family)) + " parameters");
    }
    const auto& a = p.params;
    switch (p.family) {
        case ProfileFamily::indicator:
            if (!(a[0] >= 0 && a[1] > a[0])) throw PreconditionError("indicator needs 0 <= a < b");
            break;
        case ProfileFamily::gaussian:
            if (!(a[1] > 0)) throw PreconditionError("gaussian width must be positive");
            break;
        case ProfileFamily::two_bump:
            if (!(a[2] > 0)) throw PreconditionError("two_bump width must be positive");
            break;
        case ProfileFamily::exponential:
            if (!(a[0] > 0)) throw PreconditionError("exponential rate must be positive");
            break;
    }
}

/// Normalized samples of the profile on the lambda grid.
template <typename Real>
PureState<Real> sample_profile(const SpectralGrid<Real>& g, const Profile& p) {
    validate_profile(p);
    CVector<Real> a(g.n_e());
    for (Index j = 0; j < g.n_e(); ++j) {
        a[j] = static_cast<Real>(profile_value(p, static_cast<double>(g.lambda(j))));
    }
    PureState<Real> psi(g, std::move(a));
    if (!(psi.squared_norm() > 0)) {
        throw PreconditionError(std::string(profile_name(p.family)) +
                                " profile has no samples on the energy grid");
    }
    return psi.normalized();
}

}  // namespace liouville
