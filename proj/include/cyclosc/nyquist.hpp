#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "cyclosc/equilibrium.hpp"
#include "cyclosc/errors.hpp"
#include "cyclosc/network.hpp"
#include "cyclosc/stability.hpp"

namespace cyclosc {

/// Linearized data for one gene of a (possibly heterogeneous) loop.
struct LoopGene {
    double a, b, c, beta;
    double delay; ///< tau_r + tau_p
    double zeta;  ///< signed linearized gain, physical units
};

inline std::vector<LoopGene> loop_from(const NetworkSpec &spec, std::span<const double> zeta) {
    if (zeta.size() != spec.size()) throw DomainError("loop_from: one gain per gene required");
    std::vector<LoopGene> loop;
    loop.reserve(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto &g = spec.genes[i];
        loop.push_back({g.a, g.b, g.c, g.beta, g.tau_r + g.tau_p, zeta[i]});
    }
    return loop;
}

/// Loop transfer -prod c beta zeta e^{-s delay} / ((s + a)(s + b)) at s = j omega.
inline std::complex<double> loop_transfer(std::span<const LoopGene> loop, double omega) {
    const std::complex<double> s{0.0, omega};
    std::complex<double> acc{-1.0, 0.0};
    for (const auto &g : loop) {
        acc *= g.c * g.beta * g.zeta * std::exp(-s * g.delay) / ((s + g.a) * (s + g.b));
    }
    return acc;
}

struct NyquistSample {
    double omega;
    std::complex<double> value; ///< loop transfer
};

struct NyquistResult {
    int winding = 0;       ///< closed right-half-plane zeros of 1 + loop
    bool resolved = true;  ///< false when sampling could not certify the count
    double omega_max = 0.0;
    std::vector<NyquistSample> samples; ///< omega in [-omega_max, omega_max], ascending
};

struct NyquistOptions {
    double omega_max = 0.0; ///< <= 0 selects automatically
    std::size_t n = 4096;
    int max_depth = 40;
};

namespace detail {

struct ArgWalker {
    std::span<const LoopGene> loop;
    int max_depth;
    bool resolved = true;
    std::vector<NyquistSample> extra;

    /// Continuous change of arg(1 + loop) over [w0, w1], refining where the
    /// curve moves too fast or passes close to -1.
    double delta(double w0, std::complex<double> l0, double w1, std::complex<double> l1, int depth) {
        const auto f0 = 1.0 + l0;
        const auto f1 = 1.0 + l1;
        if (std::abs(f0) == 0.0 || std::abs(f1) == 0.0) {
            resolved = false;
            return 0.0;
        }
        const double d = std::arg(f1 / f0);
        const bool near = std::min(std::abs(f0), std::abs(f1)) < 0.1;
        const double limit = near ? std::numbers::pi / 16.0 : std::numbers::pi / 4.0;
        if (std::abs(d) <= limit) return d;
        if (depth >= max_depth || w1 - w0 <= 1e-14 * std::max(1.0, std::abs(w1))) {
            if (std::abs(d) > std::numbers::pi / 2.0) resolved = false;
            return d;
        }
        const double wm = 0.5 * (w0 + w1);
        const auto lm = loop_transfer(loop, wm);
        extra.push_back({wm, lm});
        return delta(w0, l0, wm, lm, depth + 1) + delta(wm, lm, w1, l1, depth + 1);
    }
};

} // namespace detail

/// Count closed-loop zeros of 1 + loop(s) in the closed right half plane by
/// the argument principle. The open loop is stable (poles at -a_i, -b_i),
/// strictly proper and retarded, so the contour closes at infinity with no
/// contribution and Z = -(change of arg over the imaginary axis) / 2 pi.
inline NyquistResult nyquist_winding(std::span<const LoopGene> loop, const NyquistOptions &opt = {}) {
    if (opt.n < 4) throw DomainError("nyquist_winding: n >= 4");
    NyquistResult res;

    bool all_zero = true;
    double rate_max = 0.0;
    double rate_min = std::numeric_limits<double>::infinity();
    for (const auto &g : loop) {
        if (g.zeta != 0.0) all_zero = false;
        rate_max = std::max({rate_max, g.a, g.b});
        rate_min = std::min({rate_min, g.a, g.b});
    }

    double wmax = opt.omega_max > 0.0 ? opt.omega_max : 10.0 * rate_max;
    // |loop| decreases monotonically in omega; extend until it is below 0.1.
    while (std::abs(loop_transfer(loop, wmax)) >= 0.1) {
        wmax *= 2.0;
        if (wmax > 1e12) {
            res.resolved = false;
            break;
        }
    }
    res.omega_max = wmax;

    std::vector<double> grid;
    const std::size_t half = opt.n / 2;
    grid.reserve(opt.n + 1);
    for (std::size_t k = 0; k <= half; ++k) grid.push_back(wmax * static_cast<double>(k) / static_cast<double>(half));
    const double wlo = std::min(1e-4 * rate_min, 1e-6 * wmax);
    for (std::size_t k = 0; k < opt.n - half; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(opt.n - half - 1);
        grid.push_back(wlo * std::pow(wmax / wlo, t));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<NyquistSample> pos;
    pos.reserve(grid.size());
    for (double w : grid) pos.push_back({w, loop_transfer(loop, w)});

    if (!all_zero) {
        detail::ArgWalker walker{loop, opt.max_depth, true, {}};
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < pos.size(); ++k) {
            total += walker.delta(pos[k].omega, pos[k].value, pos[k + 1].omega, pos[k + 1].value, 0);
        }
        pos.insert(pos.end(), walker.extra.begin(), walker.extra.end());
        std::sort(pos.begin(), pos.end(), [](const auto &x, const auto &y) { return x.omega < y.omega; });
        // Conjugate symmetry doubles the change over [0, omega_max].
        const double turns = -2.0 * total / (2.0 * std::numbers::pi);
        res.winding = static_cast<int>(std::lround(turns));
        if (!walker.resolved || std::abs(turns - res.winding) > 0.25) res.resolved = false;
    }

    res.samples.reserve(2 * pos.size());
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        if (it->omega > 0.0) res.samples.push_back({-it->omega, std::conj(it->value)});
    }
    res.samples.insert(res.samples.end(), pos.begin(), pos.end());
    return res;
}

inline NyquistResult nyquist_winding(const NetworkSpec &spec, const Equilibrium &eq, const NyquistOptions &opt = {}) {
    const auto loop = loop_from(spec, eq.zeta);
    return nyquist_winding(loop, opt);
}

inline Verdict verdict_from_winding(const NyquistResult &res) {
    Verdict v;
    v.method = Method::Nyquist;
    v.margin = static_cast<double>(res.winding);
    if (!res.resolved) {
        v.outcome = Outcome::Inconclusive;
    } else {
        v.outcome = res.winding > 0 ? Outcome::OscillationsGuaranteed : Outcome::LocallyStable;
    }
    return v;
}

} // namespace cyclosc
