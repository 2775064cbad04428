#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "cyclosc/errors.hpp"

namespace cyclosc {

enum class Regulation { Repress, Activate };

inline std::string_view to_string(Regulation r) { return r == Regulation::Repress ? "repress" : "activate"; }

inline Regulation regulation_from_string(std::string_view s) {
    if (s == "repress") return Regulation::Repress;
    if (s == "activate") return Regulation::Activate;
    throw DomainError("regulation must be 'repress' or 'activate', got '" + std::string(s) + "'");
}

/// +1 for activation, -1 for repression.
constexpr int sign_of(Regulation r) { return r == Regulation::Activate ? 1 : -1; }

struct HillValue {
    double value;
    double derivative; ///< d/dp, in 1/concentration
};

/// Hill nonlinearity on the scaled input x = p / p0.
///
///   repress:  1 / (1 + x^nu)
///   activate: x^nu / (1 + x^nu)
///
/// The derivative is with respect to p (not x). At p = 0 it is +-1/p0 for
/// nu = 1 and 0 for nu > 1.
inline HillValue hill_eval(Regulation kind, double p, double nu, double p0 = 1.0) {
    if (!(p >= 0.0)) throw DomainError("hill_eval: concentration must be >= 0");
    if (!(nu >= 1.0)) throw DomainError("hill_eval: Hill coefficient must be >= 1");
    if (!(p0 > 0.0)) throw DomainError("hill_eval: half-saturation scale must be > 0");

    const double x = p / p0;
    if (x <= 1.0) {
        // x^(nu-1) written out so that nu == 1 gives exactly 1 at x == 0.
        const double xnu1 = (nu == 1.0) ? 1.0 : std::pow(x, nu - 1.0);
        const double xnu = xnu1 * x;
        const double denom = 1.0 + xnu;
        const double slope = nu * xnu1 / (p0 * denom * denom);
        if (kind == Regulation::Repress) return {1.0 / denom, -slope};
        return {xnu / denom, slope};
    }
    // Large inputs: work with u = x^-nu so nothing overflows.
    const double u = std::pow(x, -nu);
    const double denom = 1.0 + u;
    const double slope = nu * u / (p0 * x * denom * denom);
    if (kind == Regulation::Repress) return {u / denom, -slope};
    return {1.0 / denom, slope};
}

} // namespace cyclosc
