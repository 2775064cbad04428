#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "cyclosc/criteria.hpp"
#include "cyclosc/errors.hpp"
#include "cyclosc/linearization.hpp"

namespace cyclosc {

enum class Outcome { OscillationsGuaranteed, LocallyStable, Inconclusive };
enum class Method { Analytic, Graphical, Roots, Nyquist };

inline std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::OscillationsGuaranteed: return "OscillationsGuaranteed";
    case Outcome::LocallyStable: return "LocallyStable";
    case Outcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

inline std::string_view to_string(Method m) {
    switch (m) {
    case Method::Analytic: return "analytic";
    case Method::Graphical: return "graphical";
    case Method::Roots: return "roots";
    case Method::Nyquist: return "nyquist";
    }
    return "analytic";
}

struct Witness {
    std::optional<double> omega_sharp; ///< dimensionless frequency where the phase is pi/N
    std::optional<double> omega_star;  ///< dimensionless frequency where the gain is L
};

/// Verdict of one stability test.
///
/// `margin` is positive exactly when the test certifies instability:
///   analytic   L - L_bar
///   graphical  L - gain(omega_sharp)
///   roots      real part of the dominant characteristic root
///   nyquist    number of unstable closed-loop zeros
struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    double margin = std::numeric_limits<double>::quiet_NaN();
    Witness witness;
    Method method = Method::Analytic;
};

struct StabilityTolerances {
    double scalar = 1e-10; ///< L_bar and omega_sharp root finds
    double newton = 1e-8;  ///< characteristic-root Newton iterations
    double tie = 1e-9;     ///< |margin| below this is reported as LocallyStable
};

/// Outcome from a signed margin. Ties fall on the stable side since the
/// instability conditions are strict inequalities.
inline Outcome outcome_from_margin(double margin, double tie) {
    if (std::isnan(margin)) return Outcome::Inconclusive;
    return margin > tie ? Outcome::OscillationsGuaranteed : Outcome::LocallyStable;
}

/// L > L_bar(N, Q, tau~).
inline Verdict test_analytic(const ReducedModel &rm, const StabilityTolerances &tol = {}) {
    Verdict v;
    v.method = Method::Analytic;
    const double lbar = critical_gain(rm.N, rm.Q, rm.tau_tilde, tol.scalar);
    v.margin = rm.L - lbar;
    v.outcome = outcome_from_margin(v.margin, tol.tie);
    if (rm.L > 1.0) v.witness.omega_star = crossing_frequency(rm.Q, rm.L);
    return v;
}

/// First frequency where the unwrapped phase reaches pi/N, or nullopt when
/// it never does (N = 1 without delay: the phase stays below pi).
inline std::optional<double> phase_crossing_frequency(std::size_t N, double Q, double tau_tilde, double tol = 1e-10) {
    const double target = std::numbers::pi / static_cast<double>(N);
    if (tau_tilde == 0.0 && N == 1) return std::nullopt;
    double lo = 0.0;
    double hi = 1.0;
    while (phase_gain(Q, tau_tilde, hi).phase < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::nullopt;
    }
    for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phase_gain(Q, tau_tilde, mid).phase < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Graphical test: the eigenvalue L e^{j pi/N} lies inside the instability
/// region iff the boundary curve, at the frequency where its phase is pi/N,
/// has modulus below L.
inline Verdict test_graphical(const ReducedModel &rm, const StabilityTolerances &tol = {}) {
    Verdict v;
    v.method = Method::Graphical;
    const auto w_sharp = phase_crossing_frequency(rm.N, rm.Q, rm.tau_tilde, tol.scalar);
    if (w_sharp) {
        v.witness.omega_sharp = *w_sharp;
        v.margin = rm.L - phase_gain(rm.Q, rm.tau_tilde, *w_sharp).gain;
    } else {
        v.margin = -std::numeric_limits<double>::infinity();
    }
    if (rm.L > 1.0) v.witness.omega_star = crossing_frequency(rm.Q, rm.L);
    v.outcome = outcome_from_margin(v.margin, tol.tie);
    return v;
}

struct BoundaryPoint {
    double omega_tilde; ///< negative for the conjugate branch
    std::complex<double> z;
};

/// Samples of the instability-region boundary gain e^{j phase} on a uniform
/// grid of [0, omega_max], followed by the conjugate branch (reported with
/// negative frequency) in reverse order.
inline std::vector<BoundaryPoint> boundary_samples(double Q, double tau_tilde, double omega_max, std::size_t n) {
    if (n < 2) throw DomainError("boundary_samples: n >= 2");
    if (!(omega_max > 0.0)) throw DomainError("boundary_samples: omega_max > 0");
    if (!(Q > 0.0 && Q <= 1.0)) throw DomainError("boundary_samples: Q must be in (0, 1]");
    if (!(tau_tilde >= 0.0)) throw DomainError("boundary_samples: tau_tilde must be >= 0");
    std::vector<BoundaryPoint> pts;
    pts.reserve(2 * n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = omega_max * static_cast<double>(k) / static_cast<double>(n - 1);
        const auto pg = phase_gain(Q, tau_tilde, w);
        pts.push_back({w, std::polar(pg.gain, pg.phase)});
    }
    for (std::size_t k = n; k-- > 1;) pts.push_back({-pts[k].omega_tilde, std::conj(pts[k].z)});
    return pts;
}

} // namespace cyclosc
