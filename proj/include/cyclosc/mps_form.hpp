#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "cyclosc/hill.hpp"
#include "cyclosc/network.hpp"

namespace cyclosc {

/// Result of rewriting the network as a monotone cyclic feedback system in
/// scaled time t / T with state x_k = sigma_k * (interleaved state in
/// reversed gene order). Indices follow the 1-based construction, stored
/// 0-based.
struct MpsReport {
    bool applicable = false; ///< false when every delay is zero (T = 0)
    double T = 0.0;
    std::vector<int> sigma;
    std::vector<int> rho;
    int z_star = 0;
    bool matches_cycle_sign = false;
    bool all_positive = false;
    double min_signed_partial = 0.0; ///< min over samples of z_k dg_k/dv
    std::size_t samples = 0;
};

/// Build sigma, rho and z* for `spec` and check the sign conditions of the
/// transformed system at `samples` random positive states.
inline MpsReport mps_form_check(const NetworkSpec &spec, std::size_t samples, std::uint64_t seed = 1) {
    validate(spec);
    MpsReport rep;
    const std::size_t N = spec.size();
    rep.T = spec.total_delay();
    if (!(rep.T > 0.0)) return rep;
    rep.applicable = true;
    rep.samples = samples;

    // gene(j) for 1-based j, taken cyclically.
    auto gene = [&](std::size_t j) -> const GeneSpec & { return spec.genes[(j + N - 1) % N]; };

    rep.rho.assign(2 * N, 1);
    for (std::size_t i = 1; i <= N; ++i) rep.rho[2 * i - 2] = sign_of(gene(N - i + 2).regulation);
    rep.sigma.assign(2 * N, 1);
    for (std::size_t k = 2; k <= 2 * N; ++k) rep.sigma[k - 1] = rep.sigma[k - 2] * rep.rho[k - 1];
    rep.z_star = 1;
    for (int r : rep.rho) rep.z_star *= r;
    rep.matches_cycle_sign = rep.z_star == spec.cycle_sign();

    auto sig = [&](std::size_t k) { return rep.sigma[(k - 1) % (2 * N)]; };
    auto zk = [&](std::size_t k) { return k == 2 * N ? rep.z_star : 1; };
    const double T = rep.T;

    // dg_k/dv where v is the delayed argument x_{k+1}.
    auto partial = [&](std::size_t k, double v) {
        const std::size_t i = (k + 1) / 2;
        const auto &g = gene(N - i + 1);
        if (k % 2 == 1) return g.c * T * rep.rho[k];
        const int s_in = sig(k + 1);
        return g.beta * T * sig(k) * s_in * hill_eval(g.regulation, s_in * v, spec.nu, g.p0).derivative;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    rep.all_positive = true;
    rep.min_signed_partial = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t k = 1; k <= 2 * N; ++k) {
            // A positive concentration mapped into the orthant of x_{k+1}.
            const std::size_t i = (k + 1) / 2;
            const double scale = k % 2 == 0 ? gene(N - i + 1).p0 : 1.0;
            const double q = scale * std::pow(10.0, logu(rng));
            const double v = sig(k + 1) * q;
            const double d = zk(k) * partial(k, v);
            rep.min_signed_partial = std::min(rep.min_signed_partial, d);
            if (!(d > 0.0)) rep.all_positive = false;
        }
    }
    return rep;
}

} // namespace cyclosc
