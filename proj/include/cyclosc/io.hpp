#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyclosc/ddesim.hpp"
#include "cyclosc/equilibrium.hpp"
#include "cyclosc/errors.hpp"
#include "cyclosc/network.hpp"
#include "cyclosc/regions.hpp"

namespace cyclosc {

using json = nlohmann::json;

/// Shortest text that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading " + path.string());
    return ss.str();
}

/// Write next to the target and rename over it, so readers never observe a
/// partial file.
inline void write_atomic(const std::filesystem::path &path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("error while writing " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temporary file onto " + path.string());
    }
}

// ---- NetworkSpec <-> JSON ----

inline json to_json(const GeneSpec &g) {
    return {{"a", g.a},           {"b", g.b},           {"c", g.c},
            {"beta", g.beta},     {"tau_r", g.tau_r},   {"tau_p", g.tau_p},
            {"regulation", std::string(to_string(g.regulation))},
            {"alpha0", g.alpha0}, {"p0", g.p0}};
}

inline json to_json(const NetworkSpec &s) {
    json genes = json::array();
    for (const auto &g : s.genes) genes.push_back(to_json(g));
    return {{"nu", s.nu}, {"genes", genes}};
}

namespace detail {

inline double number_field(const json &obj, const char *key, std::optional<double> fallback, std::size_t gene) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (fallback) return *fallback;
        throw DomainError("gene " + std::to_string(gene + 1) + ": missing field '" + key + "'");
    }
    if (!it->is_number()) throw DomainError("gene " + std::to_string(gene + 1) + ": field '" + key + "' must be a number");
    return it->get<double>();
}

} // namespace detail

/// Parse a spec document. Required per gene: a, b, c, beta. Optional:
/// tau_r, tau_p (0), regulation ("repress"), alpha0 (0), p0 (1); nu defaults
/// to 2. Unknown keys are rejected so typos do not pass silently.
inline NetworkSpec spec_from_json(const json &doc) {
    if (!doc.is_object()) throw DomainError("spec: top level must be an object");
    for (const auto &[k, v] : doc.items()) {
        if (k != "nu" && k != "genes") throw DomainError("spec: unknown key '" + k + "'");
    }
    NetworkSpec s;
    if (doc.contains("nu")) {
        if (!doc["nu"].is_number()) throw DomainError("spec: nu must be a number");
        s.nu = doc["nu"].get<double>();
    }
    if (!doc.contains("genes") || !doc["genes"].is_array()) throw DomainError("spec: 'genes' array required");
    std::size_t i = 0;
    for (const auto &jg : doc["genes"]) {
        if (!jg.is_object()) throw DomainError("spec: gene " + std::to_string(i + 1) + " must be an object");
        for (const auto &[k, v] : jg.items()) {
            static constexpr std::array<std::string_view, 9> known{"a",     "b",          "c",      "beta", "tau_r",
                                                                    "tau_p", "regulation", "alpha0", "p0"};
            if (std::find(known.begin(), known.end(), k) == known.end()) {
                throw DomainError("gene " + std::to_string(i + 1) + ": unknown key '" + k + "'");
            }
        }
        GeneSpec g;
        g.a = detail::number_field(jg, "a", std::nullopt, i);
        g.b = detail::number_field(jg, "b", std::nullopt, i);
        g.c = detail::number_field(jg, "c", std::nullopt, i);
        g.beta = detail::number_field(jg, "beta", std::nullopt, i);
        g.tau_r = detail::number_field(jg, "tau_r", 0.0, i);
        g.tau_p = detail::number_field(jg, "tau_p", 0.0, i);
        g.alpha0 = detail::number_field(jg, "alpha0", 0.0, i);
        g.p0 = detail::number_field(jg, "p0", 1.0, i);
        if (jg.contains("regulation")) {
            if (!jg["regulation"].is_string()) throw DomainError("gene " + std::to_string(i + 1) + ": regulation must be a string");
            g.regulation = regulation_from_string(jg["regulation"].get<std::string>());
        }
        s.genes.push_back(g);
        ++i;
    }
    return s;
}

inline NetworkSpec load_spec_file(const std::filesystem::path &path) {
    const auto text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw DomainError(path.string() + ": " + e.what());
    }
    return spec_from_json(doc);
}

// ---- CSV ----

inline std::string trajectory_csv(const Trajectory &traj, std::size_t stride = 1) {
    if (stride == 0) throw DomainError("stride must be >= 1");
    std::string out = "t";
    for (std::size_t i = 1; i <= traj.N; ++i) out += ",r" + std::to_string(i) + ",p" + std::to_string(i);
    out += '\n';
    const std::size_t width = 2 * traj.N;
    for (std::size_t k = 0; k < traj.steps(); k += stride) {
        out += format_double(traj.t[k]);
        for (std::size_t c = 0; c < width; ++c) {
            out += ',';
            out += format_double(traj.state[k * width + c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string grid_csv(const RegionGrid &g) {
    std::string out = "x,y,outcome,L,L_bar,margin\n";
    for (std::size_t j = 0; j < g.y.n; ++j) {
        for (std::size_t i = 0; i < g.x.n; ++i) {
            const auto &c = g.at(i, j);
            out += format_double(g.x.value(i)) + ',' + format_double(g.y.value(j)) + ',' + std::string(cell_label(c)) +
                   ',' + format_double(c.L) + ',' + format_double(c.L_bar) + ',' + format_double(c.margin) + '\n';
        }
    }
    return out;
}

inline std::string boundary_csv(const std::vector<BoundaryPointXY> &pts) {
    std::string out = "segment,x,y\n";
    for (const auto &p : pts) out += std::to_string(p.segment) + ',' + format_double(p.x) + ',' + format_double(p.y) + '\n';
    return out;
}

inline json axis_json(const AxisSpec &ax) {
    return {{"parameter", std::string(to_string(ax.param))},
            {"lo", ax.lo},
            {"hi", ax.hi},
            {"n", ax.n},
            {"scale", ax.log10 ? "log10" : "linear"}};
}

// ---- history ----

/// Sampled history from CSV with header "t,r1,p1,...,rN,pN".
inline History history_from_csv(std::string_view text, std::size_t n_genes) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw DomainError("history csv: empty");
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::logic_error &) {
                throw DomainError("history csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (vals.size() != 1 + 2 * n_genes) {
            throw DomainError("history csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(1 + 2 * n_genes) + " columns");
        }
        times.push_back(vals.front());
        rows.emplace_back(vals.begin() + 1, vals.end());
    }
    return History::sampled(std::move(times), std::move(rows));
}

/// Interleaved equilibrium state with gene 1 scaled by (1 + eps).
inline std::vector<double> equilibrium_state(const Equilibrium &eq, double eps = 0.0) {
    std::vector<double> v;
    for (std::size_t i = 0; i < eq.r_star.size(); ++i) {
        v.push_back(eq.r_star[i]);
        v.push_back(eq.p_star[i]);
    }
    if (!v.empty()) {
        v[0] *= 1.0 + eps;
        v[1] *= 1.0 + eps;
    }
    return v;
}

/// History from "const:v1,...,v2N", "equilibrium", "equilibrium+EPS%", or a
/// CSV file path.
inline History parse_history(std::string_view text, const NetworkSpec &spec) {
    const std::size_t width = 2 * spec.size();
    if (text.starts_with("const:")) {
        std::vector<double> vals;
        std::string rest(text.substr(6));
        std::istringstream ss(rest);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::logic_error &) {
                throw DomainError("history: bad number '" + cell + "'");
            }
        }
        if (vals.size() != width) throw DomainError("history: const needs " + std::to_string(width) + " values");
        return History::constant(std::move(vals));
    }
    if (text.starts_with("equilibrium")) {
        auto rest = text.substr(11);
        double eps = 0.0;
        if (!rest.empty()) {
            if (!rest.starts_with("+") || !rest.ends_with("%")) throw DomainError("history: expected equilibrium+EPS%");
            const std::string num(rest.substr(1, rest.size() - 2));
            try {
                std::size_t used = 0;
                eps = std::stod(num, &used) / 100.0;
                if (used != num.size()) throw std::invalid_argument(num);
            } catch (const std::logic_error &) {
                throw DomainError("history: bad percentage '" + num + "'");
            }
        }
        return History::constant(equilibrium_state(solve_equilibrium(spec), eps));
    }
    return history_from_csv(read_file(std::string(text)), spec.size());
}

} // namespace cyclosc
