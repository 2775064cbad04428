#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "cyclosc/equilibrium.hpp"
#include "cyclosc/errors.hpp"
#include "cyclosc/network.hpp"

namespace cyclosc {

/// Homogeneous linearization of the loop around its equilibrium.
///
/// All gene dynamics share 1/((T_r s + 1)(T_p s + 1)) e^{-s tau}; the
/// interaction matrix is a weighted cyclic shift whose eigenvalues sit on a
/// ring of radius L at angles (2k - 1) pi / N.
struct ReducedModel {
    std::size_t N = 0;
    double T_r = 0.0;       ///< 1/a
    double T_p = 0.0;       ///< 1/b
    double T_A = 0.0;       ///< arithmetic mean of T_r, T_p
    double T_G = 0.0;       ///< geometric mean of T_r, T_p
    double Q = 0.0;         ///< T_G / T_A, in (0, 1]
    double tau = 0.0;       ///< loop delay averaged per gene
    double tau_tilde = 0.0; ///< tau / T_A
    std::vector<double> R;  ///< per-gene sqrt(c beta / (a b p0))
    std::vector<double> gain; ///< per-gene |zeta_i| R_i^2 in normalized units
    double L = 0.0;         ///< geometric mean of the loop gains
    std::vector<std::complex<double>> lambda;
};

/// Eigenvalues L e^{j(2k-1)pi/N}, k = 1..N.
inline std::vector<std::complex<double>> ring_eigenvalues(std::size_t n, double L) {
    std::vector<std::complex<double>> lam(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double ang = static_cast<double>(2 * k - 1) * std::numbers::pi / static_cast<double>(n);
        lam[k - 1] = std::polar(L, ang);
    }
    return lam;
}

/// Dimensionless time-constant summary shared by the delay-free factor.
inline void fill_time_constants(ReducedModel &rm, double a, double b) {
    rm.T_r = 1.0 / a;
    rm.T_p = 1.0 / b;
    rm.T_A = 0.5 * (rm.T_r + rm.T_p);
    rm.T_G = std::sqrt(rm.T_r * rm.T_p);
    rm.Q = (rm.T_r == rm.T_p) ? 1.0 : rm.T_G / rm.T_A;
}

/// Reduce using explicit linearized gains (physical units, one per gene).
/// Used directly by the worst-case reduction where gains are bounded rather
/// than computed from an equilibrium.
inline ReducedModel reduce_with_gains(const NetworkSpec &spec, std::span<const double> zeta,
                                      double homogeneity_tol = 1e-9) {
    if (spec.genes.empty()) throw ValidationError(ValidationKind::EmptyNetwork, std::nullopt, "empty network");
    if (zeta.size() != spec.size()) throw DomainError("reduce: one gain per gene required");
    if (!is_homogeneous(spec, homogeneity_tol)) {
        throw HeterogeneousSpec("reduce: degradation rates differ between genes; "
                                "apply worst_case_reduction first or use nyquist_winding");
    }
    ReducedModel rm;
    rm.N = spec.size();
    fill_time_constants(rm, spec.genes.front().a, spec.genes.front().b);
    rm.tau = spec.total_delay() / static_cast<double>(rm.N);
    rm.tau_tilde = rm.tau / rm.T_A;

    rm.R.resize(rm.N);
    rm.gain.resize(rm.N);
    double log_sum = 0.0;
    bool zero_gain = false;
    for (std::size_t i = 0; i < rm.N; ++i) {
        const auto &g = spec.genes[i];
        const double r2 = g.c * g.beta / (g.a * g.b * g.p0);
        rm.R[i] = std::sqrt(r2);
        // df/dx with x = p / p0 is p0 * df/dp
        rm.gain[i] = std::abs(zeta[i] * g.p0) * r2;
        if (rm.gain[i] == 0.0) {
            zero_gain = true;
        } else {
            log_sum += std::log(rm.gain[i]);
        }
    }
    rm.L = zero_gain ? 0.0 : std::exp(log_sum / static_cast<double>(rm.N));
    rm.lambda = ring_eigenvalues(rm.N, rm.L);
    return rm;
}

inline ReducedModel reduce(const NetworkSpec &spec, const Equilibrium &eq) {
    return reduce_with_gains(spec, eq.zeta);
}

/// Build a reduced model from the dimensionless groups alone (T_A = 1 and
/// T_r >= T_p chosen to realize Q).
inline ReducedModel reduced_from_groups(std::size_t n, double Q, double tau_tilde, double L) {
    if (n < 1) throw DomainError("reduced_from_groups: N >= 1");
    if (!(Q > 0.0 && Q <= 1.0)) throw DomainError("reduced_from_groups: Q in (0, 1]");
    if (!(tau_tilde >= 0.0)) throw DomainError("reduced_from_groups: tau_tilde >= 0");
    if (!(L >= 0.0)) throw DomainError("reduced_from_groups: L >= 0");
    ReducedModel rm;
    rm.N = n;
    // T_r + T_p = 2, T_r T_p = Q^2
    const double disc = std::sqrt(std::max(0.0, 1.0 - Q * Q));
    rm.T_r = 1.0 + disc;
    rm.T_p = Q * Q / rm.T_r;
    rm.T_A = 1.0;
    rm.T_G = Q;
    rm.Q = Q;
    rm.tau = tau_tilde;
    rm.tau_tilde = tau_tilde;
    rm.R.assign(n, 1.0);
    rm.gain.assign(n, L);
    rm.L = L;
    rm.lambda = ring_eigenvalues(n, L);
    return rm;
}

} // namespace cyclosc
