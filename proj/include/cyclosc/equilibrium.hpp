#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cyclosc/errors.hpp"
#include "cyclosc/hill.hpp"
#include "cyclosc/network.hpp"

namespace cyclosc {

/// The unique steady state of the delayed network.
struct Equilibrium {
    std::vector<double> r_star; ///< mRNA levels
    std::vector<double> p_star; ///< protein levels
    std::vector<double> zeta;   ///< f_i'(p*_{i-1}), 1/concentration
    double residual = 0.0;      ///< max |rhs| at the fixed point
};

struct EquilibriumOptions {
    double tol = 1e-12;  ///< relative tolerance on the fixed-point coordinate
    int max_iter = 200;  ///< bisection budget
};

namespace detail {

/// Steady-state protein level of gene i given its upstream protein level.
inline double steady_protein(const NetworkSpec &spec, std::size_t i, double upstream_p) {
    const auto &g = spec.genes[i];
    const double f = hill_eval(g.regulation, upstream_p, spec.nu, g.p0).value;
    const double r = (g.beta * f + g.alpha0) / g.a;
    return g.c * r / g.b;
}

/// Return map: push the last gene's protein level once around the cycle.
inline double return_map(const NetworkSpec &spec, double p_last) {
    double p = p_last;
    for (std::size_t i = 0; i < spec.size(); ++i) p = steady_protein(spec, i, p);
    return p;
}

/// Upper bound on any steady-state protein level (Hill functions are <= 1).
inline double protein_bound(const NetworkSpec &spec) {
    double u = 0.0;
    for (const auto &g : spec.genes) u = std::max(u, g.c * (g.beta + g.alpha0) / (g.a * g.b));
    return u;
}

/// Bisection for the fixed point of the (decreasing) return map on [lo, hi].
inline double bisect_fixed_point(const NetworkSpec &spec, double lo, double hi, const EquilibriumOptions &opt) {
    for (int it = 0; it < opt.max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= opt.tol * hi || mid <= lo || mid >= hi) return mid;
        if (return_map(spec, mid) - mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (hi - lo <= opt.tol * hi) return 0.5 * (lo + hi);
    throw ConvergenceError("equilibrium: bisection did not reach tolerance within the iteration budget");
}

} // namespace detail

/// Linearized gains zeta_i = f_i'(p*_{i-1}) in physical units.
inline std::vector<double> linear_gains(const NetworkSpec &spec, const Equilibrium &eq) {
    std::vector<double> z(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto &g = spec.genes[i];
        z[i] = hill_eval(g.regulation, eq.p_star[spec.upstream(i)], spec.nu, g.p0).derivative;
    }
    return z;
}

/// Max absolute right-hand side of the delayed dynamics evaluated at a
/// constant state (delays are irrelevant for constant states).
inline double steady_residual(const NetworkSpec &spec, const std::vector<double> &r, const std::vector<double> &p) {
    double res = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto &g = spec.genes[i];
        const double f = hill_eval(g.regulation, p[spec.upstream(i)], spec.nu, g.p0).value;
        res = std::max(res, std::abs(-g.a * r[i] + g.beta * f + g.alpha0));
        res = std::max(res, std::abs(-g.b * p[i] + g.c * r[i]));
    }
    return res;
}

/// Solve for the unique equilibrium.
///
/// Under a negative cycle the return map F (last protein -> last protein) is
/// non-increasing, so F(x) - x has exactly one root on [0, U] where U bounds
/// every steady-state protein level. Bisection finds it; the remaining
/// components follow by forward substitution.
inline Equilibrium solve_equilibrium(const NetworkSpec &spec, const EquilibriumOptions &opt = {}) {
    if (spec.genes.empty()) throw ValidationError(ValidationKind::EmptyNetwork, std::nullopt, "empty network");
    if (spec.cycle_sign() != -1) {
        throw ValidationError(ValidationKind::PositiveCycle, std::nullopt, "equilibrium requires a negative cycle");
    }
    if (!(opt.tol > 0.0)) throw DomainError("solve_equilibrium: tol must be > 0");

    const std::size_t n = spec.size();
    const double upper = detail::protein_bound(spec);
    const double g0 = detail::return_map(spec, 0.0);

    double p_last = 0.0;
    if (g0 < 0.0) {
        throw ConsistencyError("equilibrium: return map is negative at zero; bracket degenerate");
    }
    if (g0 > 0.0) {
        if (detail::return_map(spec, upper) - upper > 0.0) {
            throw ConsistencyError("equilibrium: return map exceeds its own upper bound");
        }
        p_last = detail::bisect_fixed_point(spec, 0.0, upper, opt);
    }
    // g0 == 0: zero production, the origin is the fixed point.

    Equilibrium eq;
    eq.r_star.resize(n);
    eq.p_star.resize(n);
    double p = p_last;
    for (std::size_t i = 0; i < n; ++i) {
        const auto &g = spec.genes[i];
        const double f = hill_eval(g.regulation, p, spec.nu, g.p0).value;
        eq.r_star[i] = (g.beta * f + g.alpha0) / g.a;
        eq.p_star[i] = g.c * eq.r_star[i] / g.b;
        p = eq.p_star[i];
    }
    eq.zeta = linear_gains(spec, eq);
    eq.residual = steady_residual(spec, eq.r_star, eq.p_star);
    return eq;
}

} // namespace cyclosc
