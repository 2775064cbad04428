#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "cyclosc/errors.hpp"
#include "cyclosc/linearization.hpp"
#include "cyclosc/stability.hpp"

namespace cyclosc {

using cplx = std::complex<double>;

/// Axis-aligned search region in the complex s-plane.
struct SearchRect {
    double re_lo;
    double re_hi;
    double im_lo;
    double im_hi;
};

/// Default region for the characteristic-root search.
///
/// Real part: [-2/T_A, max(2, L)/T_A]; no root lies further right because
/// |(T_r s + 1)(T_p s + 1)| >= 1 + 2 T_A Re(s) > L there.
/// Imaginary part: [0, 1.1 sqrt(L) e^{tau~} / T_G + 1/T_A]; on Re(s) >= -2/T_A
/// the modulus is at least T_G^2 Im(s)^2 e^{-2 tau~}, so roots in the strip
/// cannot sit higher.
inline SearchRect default_search_rect(const ReducedModel &rm) {
    const double L = std::max(rm.L, 1e-3);
    SearchRect r;
    r.re_lo = -2.0 / rm.T_A;
    r.re_hi = std::max(2.0, L) / rm.T_A;
    r.im_lo = 0.0;
    r.im_hi = 1.1 * std::sqrt(L) * std::exp(std::min(rm.tau_tilde, 30.0)) / rm.T_G + 1.0 / rm.T_A;
    return r;
}

namespace detail {

struct CharFn {
    double Tr, Tp, tau;
    cplx lambda;

    /// g(s) = (T_r s + 1)(T_p s + 1) e^{s tau} - lambda and g'(s).
    void eval(cplx s, cplx &g, cplx &dg) const {
        const cplx ur = Tr * s + 1.0;
        const cplx up = Tp * s + 1.0;
        const cplx e = std::exp(s * tau);
        g = ur * up * e - lambda;
        dg = (Tr * up + Tp * ur + tau * ur * up) * e;
    }
};

inline std::optional<cplx> newton(const CharFn &fn, cplx s, double tol, double max_step) {
    cplx g, dg;
    const double scale = 1.0 + std::abs(fn.lambda);
    for (int it = 0; it < 100; ++it) {
        fn.eval(s, g, dg);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || std::abs(dg) == 0.0) return std::nullopt;
        cplx step = g / dg;
        const double len = std::abs(step);
        if (len > max_step) step *= max_step / len;
        s -= step;
        if (len <= tol * std::max(1.0, std::abs(s))) {
            fn.eval(s, g, dg);
            if (std::abs(g) <= tol * scale) return s;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline void insert_unique(std::vector<cplx> &roots, cplx s, double min_dist) {
    for (const auto &r : roots) {
        if (std::abs(r - s) <= min_dist) return;
    }
    roots.push_back(s);
}

} // namespace detail

/// Roots of (T_r s + 1)(T_p s + 1) e^{s tau} = lambda found by Newton from a
/// seed grid over the upper half of `rect`. Returns only the roots reached;
/// conjugates are not added.
inline std::vector<cplx> roots_for_eigenvalue(const ReducedModel &rm, cplx lambda, const SearchRect &rect,
                                              double tol = 1e-8, std::size_t n_re = 40, std::size_t n_im = 40) {
    if (!(tol > 0.0)) throw DomainError("characteristic_roots: tol must be > 0");
    const detail::CharFn fn{rm.T_r, rm.T_p, rm.tau, lambda};
    const double max_step = 0.25 * std::max(rect.re_hi - rect.re_lo, rect.im_hi - rect.im_lo);
    std::vector<cplx> found;
    for (std::size_t i = 0; i < n_re; ++i) {
        const double re = rect.re_lo + (rect.re_hi - rect.re_lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n_re);
        for (std::size_t j = 0; j < n_im; ++j) {
            const double im =
                rect.im_lo + (rect.im_hi - rect.im_lo) * (static_cast<double>(j) + 0.5) / static_cast<double>(n_im);
            if (auto s = detail::newton(fn, {re, im}, tol, max_step)) detail::insert_unique(found, *s, 10.0 * tol);
        }
    }
    return found;
}

struct CharacteristicRoots {
    std::vector<cplx> roots;       ///< closed under conjugation
    std::optional<cplx> dominant;  ///< largest real part (upper-half representative)
};

/// Characteristic roots of the homogeneous loop over every eigenvalue of the
/// interaction matrix. The eigenvalue set is closed under conjugation, so
/// searching Im(s) >= 0 for each eigenvalue and mirroring finds all roots.
inline CharacteristicRoots characteristic_roots(const ReducedModel &rm, std::optional<SearchRect> rect = std::nullopt,
                                                double tol = 1e-8) {
    const SearchRect r = rect.value_or(default_search_rect(rm));
    // Seed spacing along Im must resolve root chains spaced about 2 pi / tau.
    std::size_t n_im = 40;
    if (rm.tau > 0.0) {
        const double needed = 2.0 * (r.im_hi - r.im_lo) * rm.tau / std::numbers::pi + 1.0;
        n_im = std::clamp<std::size_t>(static_cast<std::size_t>(needed), 40, 2000);
    }
    CharacteristicRoots out;
    for (const auto &lam : rm.lambda) {
        for (const auto &s : roots_for_eigenvalue(rm, lam, r, tol, 40, n_im)) {
            detail::insert_unique(out.roots, s, 10.0 * tol);
            detail::insert_unique(out.roots, std::conj(s), 10.0 * tol);
        }
    }
    for (const auto &s : out.roots) {
        if (!out.dominant || s.real() > out.dominant->real() + 10.0 * tol ||
            (std::abs(s.real() - out.dominant->real()) <= 10.0 * tol && s.imag() > out.dominant->imag())) {
            out.dominant = s;
        }
    }
    return out;
}

/// Verdict from the sign of the dominant root's real part.
inline Verdict test_roots(const ReducedModel &rm, const StabilityTolerances &tol = {}) {
    Verdict v;
    v.method = Method::Roots;
    const auto cr = characteristic_roots(rm, std::nullopt, tol.newton);
    if (!cr.dominant) {
        v.outcome = Outcome::Inconclusive;
        return v;
    }
    v.margin = cr.dominant->real();
    v.outcome = outcome_from_margin(v.margin, tol.tie);
    return v;
}

} // namespace cyclosc
