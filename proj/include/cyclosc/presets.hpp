#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "cyclosc/errors.hpp"
#include "cyclosc/network.hpp"

namespace cyclosc {

struct PresetInfo {
    std::string_view name;
    std::string_view description;
};

inline constexpr std::array<PresetInfo, 6> kPresets{{
    {"example7", "seven-gene repressive ring, Q = 0.8, R = 1.2, nu = 2.6, average delay 0.52"},
    {"example7_nodelay", "example7 with every delay set to zero"},
    {"counterexample", "three-gene ring a = b = 1, c = beta = 1.7498, nu = 2, delays 0.5"},
    {"repressilator", "Elowitz-Leibler repressilator, alpha = 624, alpha0 = 0.0866, gamma = 0.2, nu = 2"},
    {"hes7_wild", "Hes7 self-repression, mRNA/protein half-lives 3/20 min, delays 7/30 min"},
    {"hes7_mutant", "Hes7 self-repression with the stabilized protein (half-life 30 min)"},
}};

namespace detail {

/// Half-life (time) to first-order degradation rate.
inline double rate_from_half_life(double half_life) { return std::numbers::ln2 / half_life; }

// Hes7 reference data (minutes).
inline constexpr double kHes7Tr = 3.0;
inline constexpr double kHes7TpWild = 20.0;
inline constexpr double kHes7TpMutant = 30.0;
inline constexpr double kHes7C = 4.5;
inline constexpr double kHes7Beta = 33.0;
inline constexpr double kHes7TauR = 7.0;
inline constexpr double kHes7TauP = 30.0;
// Reported synthesis/degradation ratio of the wild type in normalized
// protein units; fixes the otherwise unreported Hill scale p0.
inline constexpr double kHes7WildR = 21.5;

inline NetworkSpec example7(bool with_delays) {
    constexpr std::array<double, 7> c{1.92, 3.84, 1.92, 3.84, 3.84, 1.92, 1.92};
    constexpr std::array<double, 7> beta{4.32, 2.16, 4.32, 2.16, 2.16, 4.32, 4.32};
    constexpr std::array<double, 7> tau_r{0.31, 0.26, 0.31, 0.31, 0.26, 0.26, 0.31};
    constexpr std::array<double, 7> tau_p{0.21, 0.26, 0.21, 0.21, 0.26, 0.26, 0.21};
    NetworkSpec s;
    s.nu = 2.6;
    for (std::size_t i = 0; i < 7; ++i) {
        GeneSpec g;
        g.a = 1.2;
        g.b = 4.8;
        g.c = c[i];
        g.beta = beta[i];
        g.tau_r = with_delays ? tau_r[i] : 0.0;
        g.tau_p = with_delays ? tau_p[i] : 0.0;
        s.genes.push_back(g);
    }
    return s;
}

inline NetworkSpec counterexample() {
    NetworkSpec s;
    s.nu = 2.0;
    GeneSpec g;
    g.a = 1.0;
    g.b = 1.0;
    g.c = 1.7498;
    g.beta = 1.7498;
    g.tau_r = 0.5;
    g.tau_p = 0.5;
    s.genes.assign(3, g);
    return s;
}

/// r' = -r + alpha f(p) + alpha0, p' = -gamma (p - r): a = 1, b = c = gamma.
inline NetworkSpec repressilator() {
    NetworkSpec s;
    s.nu = 2.0;
    GeneSpec g;
    g.a = 1.0;
    g.b = 0.2;
    g.c = 0.2;
    g.beta = 624.0;
    g.alpha0 = 0.0866;
    s.genes.assign(3, g);
    return s;
}

/// p0 solving R^2 = c beta / (a b p0) for the wild-type rates.
inline double hes7_p0() {
    const double a = rate_from_half_life(kHes7Tr);
    const double b = rate_from_half_life(kHes7TpWild);
    return kHes7C * kHes7Beta / (a * b * kHes7WildR * kHes7WildR);
}

inline NetworkSpec hes7(double protein_half_life) {
    NetworkSpec s;
    s.nu = 2.0;
    GeneSpec g;
    g.a = rate_from_half_life(kHes7Tr);
    g.b = rate_from_half_life(protein_half_life);
    g.c = kHes7C;
    g.beta = kHes7Beta;
    g.tau_r = kHes7TauR;
    g.tau_p = kHes7TauP;
    g.p0 = hes7_p0();
    s.genes.push_back(g);
    return s;
}

} // namespace detail

inline NetworkSpec load_preset(std::string_view name) {
    if (name == "example7") return detail::example7(true);
    if (name == "example7_nodelay") return detail::example7(false);
    if (name == "counterexample") return detail::counterexample();
    if (name == "repressilator") return detail::repressilator();
    if (name == "hes7_wild") return detail::hes7(detail::kHes7TpWild);
    if (name == "hes7_mutant") return detail::hes7(detail::kHes7TpMutant);
    throw UnknownPreset(std::string(name));
}

inline bool is_preset(std::string_view name) {
    for (const auto &p : kPresets) {
        if (p.name == name) return true;
    }
    return false;
}

} // namespace cyclosc
