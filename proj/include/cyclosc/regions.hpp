#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclosc/equilibrium.hpp"
#include "cyclosc/errors.hpp"
#include "cyclosc/linearization.hpp"
#include "cyclosc/network.hpp"
#include "cyclosc/parallel.hpp"
#include "cyclosc/stability.hpp"

namespace cyclosc {

/// Swept quantity. Half-life axes convert with rate = ln 2 / half-life.
enum class AxisParam {
    Nu,             ///< Hill coefficient
    RUniformScale,  ///< target geometric-mean R, reached by scaling every c_i
    Alpha,          ///< beta_i of every gene
    Gamma,          ///< b_i = c_i (repressilator protein rate)
    GammaInverse,   ///< 1 / gamma
    Alpha0,         ///< basal transcription of every gene
    TrHalfLife,     ///< mRNA half-life
    TpHalfLife,     ///< protein half-life
    TauUniformScale ///< target tau~, reached by scaling every delay
};

inline constexpr std::array<std::pair<AxisParam, std::string_view>, 9> kAxisNames{{
    {AxisParam::Nu, "nu"},
    {AxisParam::RUniformScale, "R-uniform-scale"},
    {AxisParam::Alpha, "alpha"},
    {AxisParam::Gamma, "gamma"},
    {AxisParam::GammaInverse, "gamma-inverse"},
    {AxisParam::Alpha0, "alpha0"},
    {AxisParam::TrHalfLife, "t_r-halflife"},
    {AxisParam::TpHalfLife, "t_p-halflife"},
    {AxisParam::TauUniformScale, "tau-uniform-scale"},
}};

inline std::string_view to_string(AxisParam p) {
    for (const auto &[k, name] : kAxisNames) {
        if (k == p) return name;
    }
    return "?";
}

inline AxisParam axis_param_from_string(std::string_view s) {
    for (const auto &[k, name] : kAxisNames) {
        if (name == s) return k;
    }
    throw DomainError("unknown axis parameter: " + std::string(s));
}

struct AxisSpec {
    AxisParam param = AxisParam::Nu;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 2;
    bool log10 = false;

    /// Axis coordinate (exponent for log axes) to parameter value.
    [[nodiscard]] double from_coord(double u) const { return log10 ? std::pow(10.0, u) : u; }
    [[nodiscard]] double to_coord(double v) const { return log10 ? std::log10(v) : v; }

    [[nodiscard]] double value(std::size_t k) const {
        const double u0 = to_coord(lo);
        const double u1 = to_coord(hi);
        if (k + 1 == n) return hi;
        if (k == 0) return lo;
        return from_coord(u0 + (u1 - u0) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
};

inline void validate_axis(const AxisSpec &ax) {
    if (!(ax.lo < ax.hi)) throw DomainError("axis " + std::string(to_string(ax.param)) + ": lo must be < hi");
    if (ax.n < 2) throw DomainError("axis " + std::string(to_string(ax.param)) + ": n must be >= 2");
    if (ax.log10 && !(ax.lo > 0.0)) throw DomainError("axis " + std::string(to_string(ax.param)) + ": log scale needs lo > 0");
}

/// Parse "param:lo:hi:n[:log]".
inline AxisSpec parse_axis(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 4 && parts.size() != 5) throw DomainError("axis must be param:lo:hi:n[:log], got " + std::string(text));
    AxisSpec ax;
    ax.param = axis_param_from_string(parts[0]);
    try {
        std::size_t used = 0;
        ax.lo = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        ax.hi = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
        const long n = std::stol(parts[3], &used);
        if (used != parts[3].size() || n < 0) throw std::invalid_argument(parts[3]);
        ax.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error &) {
        throw DomainError("axis: bad number in " + std::string(text));
    }
    if (parts.size() == 5) {
        if (parts[4] != "log" && parts[4] != "log10") throw DomainError("axis: scale must be log, got " + parts[4]);
        ax.log10 = true;
    }
    validate_axis(ax);
    return ax;
}

namespace detail {

inline void require_positive(double v, AxisParam p) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("axis " + std::string(to_string(p)) + ": value must be > 0");
    }
}

inline void apply_axis(NetworkSpec &spec, AxisParam p, double v) {
    switch (p) {
    case AxisParam::Nu: spec.nu = v; break;
    case AxisParam::RUniformScale: {
        require_positive(v, p);
        double log_r = 0.0;
        for (const auto &g : spec.genes) log_r += 0.5 * std::log(g.c * g.beta / (g.a * g.b * g.p0));
        const double r_geo = std::exp(log_r / static_cast<double>(spec.size()));
        const double k = (v / r_geo) * (v / r_geo);
        for (auto &g : spec.genes) g.c *= k;
        break;
    }
    case AxisParam::Alpha:
        for (auto &g : spec.genes) g.beta = v;
        break;
    case AxisParam::Gamma:
        for (auto &g : spec.genes) g.b = g.c = v;
        break;
    case AxisParam::GammaInverse:
        require_positive(v, p);
        for (auto &g : spec.genes) g.b = g.c = 1.0 / v;
        break;
    case AxisParam::Alpha0:
        for (auto &g : spec.genes) g.alpha0 = v;
        break;
    case AxisParam::TrHalfLife:
        require_positive(v, p);
        for (auto &g : spec.genes) g.a = std::numbers::ln2 / v;
        break;
    case AxisParam::TpHalfLife:
        require_positive(v, p);
        for (auto &g : spec.genes) g.b = std::numbers::ln2 / v;
        break;
    case AxisParam::TauUniformScale: {
        if (!(v >= 0.0)) throw DomainError("axis tau-uniform-scale: value must be >= 0");
        double t_a = 0.0;
        for (const auto &g : spec.genes) t_a += 0.5 * (1.0 / g.a + 1.0 / g.b);
        t_a /= static_cast<double>(spec.size());
        const double target_total = v * t_a * static_cast<double>(spec.size());
        const double total = spec.total_delay();
        if (total > 0.0) {
            const double k = target_total / total;
            for (auto &g : spec.genes) {
                g.tau_r *= k;
                g.tau_p *= k;
            }
        } else {
            const double each = 0.5 * target_total / static_cast<double>(spec.size());
            for (auto &g : spec.genes) g.tau_r = g.tau_p = each;
        }
        break;
    }
    }
}

} // namespace detail

/// Template with both axis values applied. Targets expressed through R or
/// tau~ depend on the rates, so those axes are applied after the others.
inline NetworkSpec instantiate(const NetworkSpec &tmpl, const AxisSpec &x, double xv, const AxisSpec &y, double yv) {
    NetworkSpec s = tmpl;
    const auto rank = [](AxisParam p) {
        return p == AxisParam::TauUniformScale ? 2 : p == AxisParam::RUniformScale ? 1 : 0;
    };
    std::array<std::pair<AxisParam, double>, 2> order{{{x.param, xv}, {y.param, yv}}};
    if (rank(order[0].first) > rank(order[1].first)) std::swap(order[0], order[1]);
    for (const auto &[p, v] : order) detail::apply_axis(s, p, v);
    return s;
}

struct CellRecord {
    Outcome outcome = Outcome::Inconclusive;
    double L = std::numeric_limits<double>::quiet_NaN();
    double L_bar = std::numeric_limits<double>::quiet_NaN();
    double margin = std::numeric_limits<double>::quiet_NaN();
    bool failed = false; ///< instantiation or analysis threw; reported as Undetermined
};

inline std::string_view cell_label(const CellRecord &c) { return c.failed ? "Undetermined" : to_string(c.outcome); }

/// Equilibrium, reduction and analytic test at one parameter point. Never throws.
inline CellRecord evaluate_cell(const NetworkSpec &tmpl, const AxisSpec &x, double xv, const AxisSpec &y, double yv,
                                const StabilityTolerances &tol = {}) {
    CellRecord c;
    try {
        const auto spec = instantiate(tmpl, x, xv, y, yv);
        validate(spec);
        const auto rm = reduce(spec, solve_equilibrium(spec));
        const auto v = test_analytic(rm, tol);
        c.outcome = v.outcome;
        c.L = rm.L;
        c.L_bar = rm.L - v.margin;
        c.margin = v.margin;
    } catch (const Error &) {
        c = CellRecord{};
        c.failed = true;
    }
    return c;
}

struct BoundaryPointXY {
    std::size_t segment;
    double x;
    double y;
    double margin;
};

/// cells[j * x.n + i] holds (x.value(i), y.value(j)).
struct RegionGrid {
    NetworkSpec tmpl;
    AxisSpec x;
    AxisSpec y;
    std::vector<CellRecord> cells;
    std::vector<BoundaryPointXY> boundary;

    [[nodiscard]] const CellRecord &at(std::size_t i, std::size_t j) const { return cells[j * x.n + i]; }
};

inline RegionGrid scan(const NetworkSpec &tmpl, const AxisSpec &x, const AxisSpec &y, const StabilityTolerances &tol = {},
                       std::size_t workers = worker_count()) {
    validate(tmpl);
    validate_axis(x);
    validate_axis(y);
    if (x.param == y.param) throw DomainError("scan: axes must sweep different parameters");
    RegionGrid g{tmpl, x, y, std::vector<CellRecord>(x.n * y.n), {}};
    parallel_for(
        g.cells.size(),
        [&](std::size_t k) {
            const std::size_t i = k % x.n;
            const std::size_t j = k / x.n;
            g.cells[k] = evaluate_cell(tmpl, x, x.value(i), y, y.value(j), tol);
        },
        workers);
    return g;
}

namespace detail {

/// Sign-change edge of the grid lattice. Horizontal edges join (i, j) and
/// (i + 1, j); vertical edges join (i, j) and (i, j + 1).
struct EdgeKey {
    bool vertical;
    std::size_t i;
    std::size_t j;
    auto operator<=>(const EdgeKey &) const = default;
};

inline bool crosses(const CellRecord &a, const CellRecord &b) {
    if (a.failed || b.failed || !std::isfinite(a.margin) || !std::isfinite(b.margin)) return false;
    return (a.margin > 0.0) != (b.margin > 0.0);
}

} // namespace detail

/// Refine every sign change of the margin along grid rows and columns by
/// bisection to |margin| <= tol, then join the crossings into polylines with
/// the marching-squares cell rule.
inline std::vector<BoundaryPointXY> trace_boundary(const RegionGrid &grid, double tol = 1e-8,
                                                   const StabilityTolerances &stol = {}) {
    if (!(tol > 0.0)) throw DomainError("trace_boundary: tol must be > 0");
    const auto &X = grid.x;
    const auto &Y = grid.y;
    if (grid.cells.size() != X.n * Y.n) throw DomainError("trace_boundary: cell count does not match axes");

    std::vector<detail::EdgeKey> edges;
    for (std::size_t j = 0; j < Y.n; ++j) {
        for (std::size_t i = 0; i + 1 < X.n; ++i) {
            if (detail::crosses(grid.at(i, j), grid.at(i + 1, j))) edges.push_back({false, i, j});
        }
    }
    for (std::size_t j = 0; j + 1 < Y.n; ++j) {
        for (std::size_t i = 0; i < X.n; ++i) {
            if (detail::crosses(grid.at(i, j), grid.at(i, j + 1))) edges.push_back({true, i, j});
        }
    }

    // Refined crossing for each edge.
    std::vector<BoundaryPointXY> refined(edges.size());
    parallel_for(edges.size(), [&](std::size_t k) {
        const auto &e = edges[k];
        const AxisSpec &ax = e.vertical ? Y : X;
        const std::size_t idx = e.vertical ? e.j : e.i;
        double u_lo = ax.to_coord(ax.value(idx));
        double u_hi = ax.to_coord(ax.value(idx + 1));
        const auto eval = [&](double u) {
            const double v = ax.from_coord(u);
            return e.vertical ? evaluate_cell(grid.tmpl, X, X.value(e.i), Y, v, stol)
                              : evaluate_cell(grid.tmpl, X, v, Y, Y.value(e.j), stol);
        };
        const auto &c0 = grid.at(e.i, e.j);
        const bool lo_positive = c0.margin > 0.0;
        double u_mid = 0.5 * (u_lo + u_hi);
        double m_mid = std::numeric_limits<double>::quiet_NaN();
        for (int it = 0; it < 200; ++it) {
            u_mid = 0.5 * (u_lo + u_hi);
            const auto c = eval(u_mid);
            m_mid = c.margin;
            if (c.failed || std::abs(m_mid) <= tol) break;
            if ((m_mid > 0.0) == lo_positive) {
                u_lo = u_mid;
            } else {
                u_hi = u_mid;
            }
            if (std::abs(u_hi - u_lo) <= 1e-15 * std::max(1.0, std::abs(u_mid))) break;
        }
        const double v = ax.from_coord(u_mid);
        refined[k] = e.vertical ? BoundaryPointXY{0, X.value(e.i), v, m_mid} : BoundaryPointXY{0, v, Y.value(e.j), m_mid};
    });

    std::map<detail::EdgeKey, std::size_t> index;
    for (std::size_t k = 0; k < edges.size(); ++k) index[edges[k]] = k;

    // Adjacency through each lattice square with corners (i..i+1, j..j+1).
    std::vector<std::vector<std::size_t>> adj(edges.size());
    const auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (std::size_t j = 0; j + 1 < Y.n; ++j) {
        for (std::size_t i = 0; i + 1 < X.n; ++i) {
            // Counter-clockwise: bottom, right, top, left.
            const std::array<detail::EdgeKey, 4> sides{{{false, i, j}, {true, i + 1, j}, {false, i, j + 1}, {true, i, j}}};
            std::vector<std::size_t> present;
            for (const auto &s : sides) {
                if (auto it = index.find(s); it != index.end()) present.push_back(it->second);
            }
            if (present.size() == 2) {
                link(present[0], present[1]);
            } else if (present.size() == 4) {
                // Saddle: keep the positive corners apart when the mean margin is negative.
                double mean = 0.0;
                for (std::size_t di = 0; di < 2; ++di) {
                    for (std::size_t dj = 0; dj < 2; ++dj) mean += grid.at(i + di, j + dj).margin;
                }
                const bool bottom_left_positive = grid.at(i, j).margin > 0.0;
                if ((mean > 0.0) == bottom_left_positive) {
                    link(present[0], present[1]);
                    link(present[2], present[3]);
                } else {
                    link(present[0], present[3]);
                    link(present[1], present[2]);
                }
            }
        }
    }

    // Walk open chains from their ends first, then closed loops.
    std::vector<BoundaryPointXY> out;
    std::vector<bool> seen(edges.size(), false);
    std::size_t segment = 0;
    const auto walk = [&](std::size_t start) {
        std::size_t prev = std::numeric_limits<std::size_t>::max();
        std::size_t cur = start;
        while (true) {
            seen[cur] = true;
            auto p = refined[cur];
            p.segment = segment;
            out.push_back(p);
            std::size_t next = std::numeric_limits<std::size_t>::max();
            for (std::size_t n : adj[cur]) {
                if (n != prev && !seen[n]) {
                    next = n;
                    break;
                }
            }
            if (next == std::numeric_limits<std::size_t>::max()) break;
            prev = cur;
            cur = next;
        }
        ++segment;
    };
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (!seen[k] && adj[k].size() <= 1) walk(k);
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (!seen[k]) walk(k);
    }
    return out;
}

} // namespace cyclosc
