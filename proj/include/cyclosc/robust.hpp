#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "cyclosc/criteria.hpp"
#include "cyclosc/errors.hpp"
#include "cyclosc/linearization.hpp"
#include "cyclosc/network.hpp"
#include "cyclosc/stability.hpp"

namespace cyclosc {

struct Interval {
    double lower;
    double upper;
};

/// Per-gene parameter box. `zeta` bounds the magnitude of the linearized gain.
struct GeneBounds {
    Interval a, b, c, beta, tau_r, tau_p, zeta;
};

struct ParameterBounds {
    std::vector<GeneBounds> genes;
};

/// Homogeneous extreme network whose instability certifies instability of
/// every member of the box. Gains are carried separately because they are
/// bounded directly rather than derived from an equilibrium.
struct WorstCase {
    NetworkSpec spec;
    std::vector<double> zeta; ///< signed physical gains, sign from the regulation
};

namespace detail {

inline void check_interval(const Interval &iv, bool strictly_positive, std::size_t gene, const char *name) {
    const bool ok = iv.lower <= iv.upper && (strictly_positive ? iv.lower > 0.0 : iv.lower >= 0.0);
    if (!ok) {
        throw DomainError("worst_case_reduction: bad interval for " + std::string(name) + " of gene " +
                          std::to_string(gene + 1));
    }
}

} // namespace detail

inline void validate_bounds(const ParameterBounds &bounds) {
    if (bounds.genes.empty()) throw DomainError("worst_case_reduction: no genes");
    for (std::size_t i = 0; i < bounds.genes.size(); ++i) {
        const auto &g = bounds.genes[i];
        detail::check_interval(g.a, true, i, "a");
        detail::check_interval(g.b, true, i, "b");
        detail::check_interval(g.c, true, i, "c");
        detail::check_interval(g.beta, true, i, "beta");
        detail::check_interval(g.tau_r, false, i, "tau_r");
        detail::check_interval(g.tau_p, false, i, "tau_p");
        detail::check_interval(g.zeta, false, i, "zeta");
    }
}

/// Largest degradation rates, smallest synthesis rates, shortest delays and
/// smallest gains: a = max a_upper, b = max b_upper, c = min c_lower,
/// beta = min beta_lower, tau_r = min tau_r_lower, tau_p = min tau_p_lower,
/// |zeta_i| = zeta_i_lower.
inline WorstCase worst_case_reduction(const ParameterBounds &bounds, const std::vector<Regulation> &signs,
                                      double nu = 2.0) {
    validate_bounds(bounds);
    if (signs.size() != bounds.genes.size()) throw DomainError("worst_case_reduction: one regulation per gene");
    int prod = 1;
    for (auto s : signs) prod *= sign_of(s);
    if (prod != -1) {
        throw ValidationError(ValidationKind::PositiveCycle, std::nullopt, "worst_case_reduction: positive cycle");
    }

    double a = 0.0, b = 0.0;
    double c = std::numeric_limits<double>::infinity();
    double beta = c, tau_r = c, tau_p = c;
    for (const auto &g : bounds.genes) {
        a = std::max(a, g.a.upper);
        b = std::max(b, g.b.upper);
        c = std::min(c, g.c.lower);
        beta = std::min(beta, g.beta.lower);
        tau_r = std::min(tau_r, g.tau_r.lower);
        tau_p = std::min(tau_p, g.tau_p.lower);
    }

    WorstCase wc;
    wc.spec.nu = nu;
    for (std::size_t i = 0; i < bounds.genes.size(); ++i) {
        GeneSpec g;
        g.a = a;
        g.b = b;
        g.c = c;
        g.beta = beta;
        g.tau_r = tau_r;
        g.tau_p = tau_p;
        g.regulation = signs[i];
        wc.spec.genes.push_back(g);
        wc.zeta.push_back(sign_of(signs[i]) * bounds.genes[i].zeta.lower);
    }
    return wc;
}

/// Analytic verdict on the worst-case reduction; OscillationsGuaranteed here
/// means every member of the box has an unstable equilibrium.
inline Verdict certify_box(const ParameterBounds &bounds, const std::vector<Regulation> &signs,
                           const StabilityTolerances &tol = {}) {
    const auto wc = worst_case_reduction(bounds, signs);
    return test_analytic(reduce_with_gains(wc.spec, wc.zeta), tol);
}

} // namespace cyclosc
