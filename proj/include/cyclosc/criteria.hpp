#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "cyclosc/errors.hpp"

namespace cyclosc {

/// Frequency response of the gene dynamics' inverse on the imaginary axis,
/// phi(j w) e^{j w tau}, in dimensionless frequency w~ = w T_A.
struct PhaseGain {
    double gain;  ///< sqrt(Q^4 w^4 + 2(2 - Q^2) w^2 + 1)
    double phase; ///< continuous argument, 0 at w = 0
};

/// Gain and unwrapped phase of (1 - Q^2 w^2 + 2 j w) e^{j w tau~}.
///
/// The polynomial factor has non-negative imaginary part for w >= 0, so its
/// continuous argument is atan2 on [0, pi). The delay adds w tau~ without
/// wrapping. Both outputs strictly increase for w > 0.
inline PhaseGain phase_gain(double Q, double tau_tilde, double omega_tilde) {
    if (!(omega_tilde >= 0.0)) throw DomainError("phase_gain: frequency must be >= 0");
    const double q2 = Q * Q;
    const double w2 = omega_tilde * omega_tilde;
    const double re = 1.0 - q2 * w2;
    const double im = 2.0 * omega_tilde;
    return {std::hypot(re, im), std::atan2(im, re) + omega_tilde * tau_tilde};
}

/// Delay-free critical gain. Infinite for N = 1 (a second-order loop without
/// delay cannot be destabilized).
inline double threshold_W(std::size_t N, double Q) {
    if (N < 1) throw DomainError("threshold_W: N >= 1");
    if (!(Q > 0.0 && Q <= 1.0)) throw DomainError("threshold_W: Q must lie in (0, 1]");
    const double ang = std::numbers::pi / static_cast<double>(N);
    const double c = std::cos(ang);
    const double s = std::sin(ang);
    const double denom = c + std::sqrt(c * c + Q * Q * s * s);
    if (N == 1 || !(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return 2.0 / denom;
}

/// D(Q, L) = 4(1 - Q^2) + Q^4 L^2.
inline double discriminant_D(double Q, double L) {
    const double q2 = Q * Q;
    return 4.0 * (1.0 - q2) + q2 * q2 * L * L;
}

/// Frequency where the gain equals L.
///
/// Closed form w~*^2 = (Q^2 - 2 + sqrt(D)) / Q^4, evaluated through the
/// equivalent (L^2 - 1) / (2 - Q^2 + sqrt(D)) which stays accurate as L -> 1.
inline double crossing_frequency(double Q, double L) {
    if (!(Q > 0.0 && Q <= 1.0)) throw DomainError("crossing_frequency: Q must lie in (0, 1]");
    if (!(L > 1.0)) throw NoCrossing("crossing_frequency: gain >= 1 everywhere, no crossing for L <= 1");
    if (std::isinf(L)) return std::numeric_limits<double>::infinity();
    const double sq = std::sqrt(discriminant_D(Q, L));
    return std::sqrt((L * L - 1.0) / (2.0 - Q * Q + sq));
}

namespace detail {

/// Phase excess at the gain crossing for a given L, minus the target pi/N.
/// Increasing in L; negative at L = 1.
inline double crossing_phase_excess(std::size_t N, double Q, double tau_tilde, double L) {
    const double target = std::numbers::pi / static_cast<double>(N);
    if (L <= 1.0) return -target;
    const double w = crossing_frequency(Q, L);
    return phase_gain(Q, tau_tilde, w).phase - target;
}

} // namespace detail

/// Critical average gain: the unique L in (1, W(N, Q)] at which the phase at
/// the gain crossing equals pi/N. Oscillations are guaranteed iff L exceeds it.
inline double critical_gain(std::size_t N, double Q, double tau_tilde, double tol = 1e-10) {
    if (N < 1) throw DomainError("critical_gain: N >= 1");
    if (!(Q > 0.0 && Q <= 1.0)) throw DomainError("critical_gain: Q must lie in (0, 1]");
    if (!(tau_tilde >= 0.0)) throw DomainError("critical_gain: tau_tilde must be >= 0");
    if (!(tol > 0.0)) throw DomainError("critical_gain: tol must be > 0");

    const double w = threshold_W(N, Q);
    if (tau_tilde == 0.0) return w;

    double lo = 1.0;
    double hi = w;
    if (std::isinf(hi)) {
        hi = 2.0;
        while (detail::crossing_phase_excess(N, Q, tau_tilde, hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw ConvergenceError("critical_gain: no upper bracket");
        }
    }
    for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::crossing_phase_excess(N, Q, tau_tilde, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Critical synthesis/degradation ratio for an all-repressive ring with
/// common R: R_bar^2 = (L/(nu - L))^{1/nu} nu / (nu - L).
inline double critical_ratio(double nu, double L_bar) {
    if (!(nu > L_bar)) throw NotApplicable("critical_ratio: requires nu > L_bar");
    const double d = nu - L_bar;
    return std::sqrt(std::pow(L_bar / d, 1.0 / nu) * nu / d);
}

} // namespace cyclosc
