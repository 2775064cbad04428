#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cyclosc/errors.hpp"
#include "cyclosc/hill.hpp"

namespace cyclosc {

/// One gene of the cycle. Gene i is regulated by the protein of gene i-1
/// (gene 0 by gene N-1).
///
/// Units: rates in 1/time, beta and alpha0 in concentration/time, delays in
/// time, p0 in concentration.
struct GeneSpec {
    double a = 1.0;      ///< mRNA degradation rate
    double b = 1.0;      ///< protein degradation rate
    double c = 1.0;      ///< protein synthesis (translation) rate
    double beta = 1.0;   ///< maximal transcription rate
    double tau_r = 0.0;  ///< transcription delay
    double tau_p = 0.0;  ///< translation delay
    Regulation regulation = Regulation::Repress;
    double alpha0 = 0.0; ///< basal (leaky) transcription
    double p0 = 1.0;     ///< half-saturation scale of the incoming Hill function

    bool operator==(const GeneSpec &) const = default;
};

struct NetworkSpec {
    std::vector<GeneSpec> genes;
    double nu = 2.0; ///< Hill coefficient shared by every interaction

    [[nodiscard]] std::size_t size() const noexcept { return genes.size(); }

    /// Index of the gene whose protein regulates gene i.
    [[nodiscard]] std::size_t upstream(std::size_t i) const noexcept {
        return i == 0 ? genes.size() - 1 : i - 1;
    }

    /// Product of the regulation signs around the loop.
    [[nodiscard]] int cycle_sign() const noexcept {
        int s = 1;
        for (const auto &g : genes) s *= sign_of(g.regulation);
        return s;
    }

    /// Total delay around the loop, sum over genes of tau_r + tau_p.
    [[nodiscard]] double total_delay() const noexcept {
        double t = 0.0;
        for (const auto &g : genes) t += g.tau_r + g.tau_p;
        return t;
    }

    bool operator==(const NetworkSpec &) const = default;
};

/// Check every GeneSpec/NetworkSpec invariant, including the negative-cycle
/// condition. Returns the spec unchanged or throws ValidationError naming the
/// offending gene.
inline const NetworkSpec &validate(const NetworkSpec &spec) {
    if (spec.genes.empty()) {
        throw ValidationError(ValidationKind::EmptyNetwork, std::nullopt, "network needs at least one gene");
    }
    if (!(spec.nu >= 1.0) || !std::isfinite(spec.nu)) {
        throw ValidationError(ValidationKind::BadHillCoefficient, std::nullopt,
                              "Hill coefficient must be >= 1, got " + std::to_string(spec.nu));
    }
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto &g = spec.genes[i];
        const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
        if (!positive(g.a) || !positive(g.b) || !positive(g.c) || !positive(g.beta)) {
            throw ValidationError(ValidationKind::NonPositiveRate, i, "rates a, b, c, beta must be > 0");
        }
        if (!(g.alpha0 >= 0.0) || !std::isfinite(g.alpha0)) {
            throw ValidationError(ValidationKind::NonPositiveRate, i, "basal rate alpha0 must be >= 0");
        }
        if (!(g.tau_r >= 0.0) || !(g.tau_p >= 0.0) || !std::isfinite(g.tau_r) || !std::isfinite(g.tau_p)) {
            throw ValidationError(ValidationKind::NegativeDelay, i, "delays must be >= 0");
        }
        if (!positive(g.p0)) {
            throw ValidationError(ValidationKind::BadHillScale, i, "half-saturation scale p0 must be > 0");
        }
    }
    if (spec.cycle_sign() != -1) {
        throw ValidationError(ValidationKind::PositiveCycle, std::nullopt,
                              "product of regulation signs is +1; a negative feedback cycle is required");
    }
    return spec;
}

/// True when a and b agree across genes within `rel_tol`.
inline bool is_homogeneous(const NetworkSpec &spec, double rel_tol = 1e-9) {
    if (spec.genes.empty()) return true;
    const double a0 = spec.genes.front().a;
    const double b0 = spec.genes.front().b;
    for (const auto &g : spec.genes) {
        if (std::abs(g.a - a0) > rel_tol * std::abs(a0)) return false;
        if (std::abs(g.b - b0) > rel_tol * std::abs(b0)) return false;
    }
    return true;
}

} // namespace cyclosc
