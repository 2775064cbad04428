#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "cyclosc/io.hpp"
#include "cyclosc/presets.hpp"
#include "cyclosc/regions.hpp"
#include "oracles.hpp"

using namespace cyclosc;
using Catch::Approx;

namespace {

bool inside(const CellRecord &c) { return !c.failed && c.outcome == Outcome::OscillationsGuaranteed; }

// Single-axis bisection on the analytic margin, holding the other axis fixed.
double bisect_margin(const NetworkSpec &tmpl, const AxisSpec &x, const AxisSpec &y, double yv, double lo, double hi) {
    const auto m = [&](double v) { return evaluate_cell(tmpl, x, v, y, yv).margin; };
    const bool lo_sign = m(lo) > 0.0;
    for (int k = 0; k < 200 && hi - lo > 1e-12 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((m(mid) > 0.0) == lo_sign ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("axis strings", "[regions]") {
    const auto ax = parse_axis("t_p-halflife:0.1:60:41:log");
    CHECK(ax.param == AxisParam::TpHalfLife);
    CHECK(ax.lo == 0.1);
    CHECK(ax.hi == 60.0);
    CHECK(ax.n == 41);
    CHECK(ax.log10);
    CHECK(ax.value(0) == 0.1);
    CHECK(ax.value(40) == 60.0);
    CHECK(ax.value(20) == Approx(std::sqrt(6.0)).epsilon(1e-12));
    const auto lin = parse_axis("nu:1:3:5");
    CHECK_FALSE(lin.log10);
    CHECK(lin.value(2) == Approx(2.0));
    for (const auto &[p, name] : kAxisNames) CHECK(parse_axis(std::string(name) + ":1:2:3").param == p);

    CHECK_THROWS_AS(parse_axis("nu:1:3"), DomainError);
    CHECK_THROWS_AS(parse_axis("bogus:1:3:4"), DomainError);
    CHECK_THROWS_AS(parse_axis("nu:3:1:4"), DomainError);
    CHECK_THROWS_AS(parse_axis("nu:1:3:1"), DomainError);
    CHECK_THROWS_AS(parse_axis("nu:0:3:4:log"), DomainError);
    CHECK_THROWS_AS(parse_axis("nu:1:3x:4"), DomainError);
    CHECK_THROWS_AS(parse_axis("nu:1:3:4:ln"), DomainError);
}

TEST_CASE("axis instantiation targets", "[regions]") {
    const auto tmpl = load_preset("example7");
    const auto r = parse_axis("R-uniform-scale:1:3:3");
    const auto tau = parse_axis("tau-uniform-scale:0:2:3");
    const auto s = instantiate(tmpl, tau, 1.5, r, 2.0);
    const auto rm = reduce(s, solve_equilibrium(s));
    for (double v : rm.R) CHECK(v == Approx(2.0).epsilon(1e-12));
    CHECK(rm.tau_tilde == Approx(1.5).epsilon(1e-12));

    const auto nodelay = load_preset("example7_nodelay");
    const auto s0 = instantiate(nodelay, tau, 0.7, r, 1.2);
    CHECK(reduce(s0, solve_equilibrium(s0)).tau_tilde == Approx(0.7).epsilon(1e-12));

    const auto rep = load_preset("repressilator");
    const auto gi = parse_axis("gamma-inverse:1:10:3");
    const auto alpha = parse_axis("alpha:1:1000:3:log");
    const auto s1 = instantiate(rep, alpha, 50.0, gi, 4.0);
    for (const auto &g : s1.genes) {
        CHECK(g.beta == 50.0);
        CHECK(g.b == 0.25);
        CHECK(g.c == 0.25);
    }
    CHECK_THROWS_AS(instantiate(rep, alpha, 50.0, gi, 0.0), DomainError);
}

TEST_CASE("cell evaluation never throws", "[regions]") {
    const auto tmpl = load_preset("counterexample");
    const auto x = parse_axis("t_r-halflife:1:2:2");
    const auto y = parse_axis("nu:1:2:2");
    const auto bad = evaluate_cell(tmpl, x, -1.0, y, 2.0);
    CHECK(bad.failed);
    CHECK(cell_label(bad) == "Undetermined");
    const auto good = evaluate_cell(tmpl, x, std::numbers::ln2, y, 2.0);
    CHECK_FALSE(good.failed);
    CHECK(good.L == Approx(1.2).margin(2e-3));
    CHECK(good.L - good.L_bar == Approx(good.margin));
    CHECK(cell_label(good) == "OscillationsGuaranteed");
}

TEST_CASE("repressilator reference point lies inside", "[regions]") {
    const auto rep = load_preset("repressilator");
    const auto c = evaluate_cell(rep, parse_axis("alpha:1:1000:2:log"), 624.0, parse_axis("gamma:0.1:1:2"), 0.2);
    CHECK(c.margin > 0.0);
    CHECK(c.outcome == Outcome::OscillationsGuaranteed);
}

TEST_CASE("example7 delay threshold", "[regions]") {
    const auto tmpl = load_preset("example7");
    const auto tau = parse_axis("tau-uniform-scale:0:3:2");
    const auto nu = parse_axis("nu:2:3:2");
    CHECK(inside(evaluate_cell(tmpl, tau, 1.0, nu, 2.6)));
    CHECK_FALSE(inside(evaluate_cell(tmpl, tau, 0.0, nu, 2.6)));
    const double star = bisect_margin(tmpl, tau, nu, 2.6, 0.0, 1.0);
    const double L = evaluate_cell(tmpl, tau, star, nu, 2.6).L;
    CHECK(oracle::critical_gain(7, 0.8, star) == Approx(L).epsilon(1e-6));
    CHECK(star > 0.0);
    CHECK(star < 1.0);
}

TEST_CASE("hes7 half-life plane", "[regions]") {
    const auto tmpl = load_preset("hes7_wild");
    const auto x = parse_axis("t_p-halflife:0.1:60:25:log");
    // log10 spacing of 0.5 puts an exact row at t_r = 3
    const auto y = parse_axis("t_r-halflife:0.3:30:5:log");
    REQUIRE(y.value(2) == Approx(3.0).epsilon(1e-12));
    const auto grid = scan(tmpl, x, y);
    CHECK(std::none_of(grid.cells.begin(), grid.cells.end(), [](const CellRecord &c) { return c.failed; }));

    CHECK(inside(evaluate_cell(tmpl, x, 20.0, y, 3.0)));
    CHECK_FALSE(inside(evaluate_cell(tmpl, x, 30.0, y, 3.0)));

    const auto pts = trace_boundary(grid, 1e-9);
    REQUIRE_FALSE(pts.empty());
    const double direct = bisect_margin(tmpl, x, y, 3.0, 20.0, 30.0);
    CHECK(direct == Approx(22.16).margin(1.0));
    std::size_t on_row = 0;
    for (const auto &p : pts) {
        CHECK(std::abs(p.margin) <= 1e-6);
        CHECK(p.x >= x.lo);
        CHECK(p.x <= x.hi);
        if (p.y == y.value(2)) {
            ++on_row;
            CHECK(p.x == Approx(direct).epsilon(1e-6));
        }
    }
    CHECK(on_row == 1);
}

TEST_CASE("grid entirely inside has no boundary", "[regions]") {
    const auto tmpl = load_preset("example7");
    const auto grid = scan(tmpl, parse_axis("nu:3:4:6"), parse_axis("R-uniform-scale:10:20:6"));
    CHECK(std::all_of(grid.cells.begin(), grid.cells.end(), inside));
    CHECK(trace_boundary(grid).empty());
}

TEST_CASE("scan is independent of the worker count", "[regions][property]") {
    const auto tmpl = load_preset("example7");
    const auto x = parse_axis("nu:1.5:4:13");
    const auto y = parse_axis("R-uniform-scale:0.5:3:11");
    const auto a = scan(tmpl, x, y, {}, 1);
    const auto b = scan(tmpl, x, y, {}, 4);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        CHECK(a.cells[k].outcome == b.cells[k].outcome);
        CHECK(a.cells[k].margin == b.cells[k].margin);
    }
    CHECK(grid_csv(a) == grid_csv(b));
    CHECK(boundary_csv(trace_boundary(a)) == boundary_csv(trace_boundary(b)));
}

TEST_CASE("oscillatory region is monotone and nested in delay", "[regions][property]") {
    const auto x = parse_axis("nu:1.2:4:21");
    const auto y = parse_axis("R-uniform-scale:0.5:4:21");
    const auto slow = scan(load_preset("example7"), x, y);
    const auto fast = scan(load_preset("example7_nodelay"), x, y);
    for (std::size_t j = 0; j < y.n; ++j) {
        for (std::size_t i = 0; i < x.n; ++i) {
            if (inside(slow.at(i, j))) {
                if (i + 1 < x.n) CHECK(inside(slow.at(i + 1, j)));
                if (j + 1 < y.n) CHECK(inside(slow.at(i, j + 1)));
            }
            if (inside(fast.at(i, j))) CHECK(inside(slow.at(i, j)));
        }
    }
}

TEST_CASE("scan rejects bad axes", "[regions]") {
    const auto tmpl = load_preset("example7");
    CHECK_THROWS_AS(scan(tmpl, parse_axis("nu:1:2:3"), parse_axis("nu:2:3:3")), DomainError);
    RegionGrid broken{tmpl, parse_axis("nu:1:2:3"), parse_axis("alpha:1:2:3"), {}, {}};
    CHECK_THROWS_AS(trace_boundary(broken), DomainError);
}
