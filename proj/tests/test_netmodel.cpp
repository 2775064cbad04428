#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "cyclosc/hill.hpp"
#include "cyclosc/network.hpp"
#include "cyclosc/presets.hpp"
#include "oracles.hpp"

using namespace cyclosc;
using Catch::Approx;

namespace {

NetworkSpec ring(std::initializer_list<Regulation> regs) {
    NetworkSpec s;
    for (auto r : regs) {
        GeneSpec g;
        g.regulation = r;
        s.genes.push_back(g);
    }
    return s;
}

} // namespace

TEST_CASE("hill values at reference points", "[netmodel]") {
    CHECK(hill_eval(Regulation::Repress, 0.0, 2.0).value == 1.0);
    CHECK(hill_eval(Regulation::Repress, 1.0, 2.0).value == Approx(0.5).epsilon(1e-15));
    CHECK(hill_eval(Regulation::Repress, 1.2248, 2.0).value == Approx(oracle::hill_repress(1.2248, 2.0)).epsilon(1e-14));
    CHECK(hill_eval(Regulation::Repress, 1.2248, 2.0).value == Approx(0.4).margin(1e-3));
    CHECK(hill_eval(Regulation::Activate, 1.0, 3.0, 2.0).value == Approx(0.125 / 1.125).epsilon(1e-14));
    CHECK(hill_eval(Regulation::Activate, 0.0, 2.0).value == 0.0);
}

TEST_CASE("hill limits and derivative signs", "[netmodel]") {
    CHECK(hill_eval(Regulation::Repress, 1e300, 3.0).value == Approx(0.0).margin(1e-300));
    CHECK(hill_eval(Regulation::Activate, 1e300, 3.0).value == Approx(1.0));
    for (double p : {0.0, 0.01, 0.5, 1.0, 7.0, 1e6}) {
        CHECK(hill_eval(Regulation::Repress, p, 2.5).derivative <= 0.0);
        CHECK(hill_eval(Regulation::Activate, p, 2.5).derivative >= 0.0);
    }
}

TEST_CASE("hill derivative at zero is analytic", "[netmodel]") {
    CHECK(hill_eval(Regulation::Activate, 0.0, 1.0, 4.0).derivative == Approx(0.25));
    CHECK(hill_eval(Regulation::Repress, 0.0, 1.0, 4.0).derivative == Approx(-0.25));
    CHECK(hill_eval(Regulation::Activate, 0.0, 2.0).derivative == 0.0);
}

TEST_CASE("hill derivative matches central differences on a log grid", "[netmodel][property]") {
    for (double nu : {1.0, 1.7, 2.0, 4.0, 8.0}) {
        for (double p0 : {0.3, 1.0, 40.0}) {
            for (int k = -30; k <= 30; ++k) {
                const double p = p0 * std::pow(10.0, k / 10.0);
                for (auto kind : {Regulation::Repress, Regulation::Activate}) {
                    const double h = 1e-5 * p;
                    // Difference whichever branch is small near p, so the
                    // quotient does not cancel against a value close to 1.
                    // f+ = 1 - f-, so the two slopes differ only in sign.
                    const bool low = p < p0;
                    const auto f = low ? oracle::hill_activate : oracle::hill_repress;
                    const double fd = (f(p + h, nu, p0) - f(p - h, nu, p0)) / (2 * h);
                    const double sign = (kind == Regulation::Activate) == low ? 1.0 : -1.0;
                    const double d = hill_eval(kind, p, nu, p0).derivative;
                    CHECK(d == Approx(sign * fd).epsilon(1e-6).margin(1e-300));
                }
            }
        }
    }
}

TEST_CASE("hill domain errors", "[netmodel]") {
    CHECK_THROWS_AS(hill_eval(Regulation::Repress, -1.0, 2.0), DomainError);
    CHECK_THROWS_AS(hill_eval(Regulation::Repress, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(hill_eval(Regulation::Repress, 1.0, 2.0, 0.0), DomainError);
}

TEST_CASE("validate accepts negative cycles", "[netmodel]") {
    using enum Regulation;
    CHECK_NOTHROW(validate(ring({Repress, Repress, Repress})));
    CHECK_NOTHROW(validate(ring({Repress})));
    CHECK_NOTHROW(validate(ring({Activate, Repress})));
}

TEST_CASE("validate names the failure", "[netmodel]") {
    using enum Regulation;
    try {
        validate(ring({Repress, Repress, Activate}));
        FAIL("positive cycle accepted");
    } catch (const ValidationError &e) {
        CHECK(e.kind() == ValidationKind::PositiveCycle);
    }
    auto s = ring({Repress, Repress, Repress});
    s.genes[1].b = 0.0;
    try {
        validate(s);
        FAIL("zero rate accepted");
    } catch (const ValidationError &e) {
        CHECK(e.kind() == ValidationKind::NonPositiveRate);
        REQUIRE(e.gene());
        CHECK(*e.gene() == 1);
    }
    s = ring({Repress});
    s.genes[0].tau_p = -0.1;
    CHECK_THROWS_MATCHES(validate(s), ValidationError,
                         Catch::Matchers::Predicate<ValidationError>(
                             [](const ValidationError &e) { return e.kind() == ValidationKind::NegativeDelay; }));
    s = ring({Repress});
    s.nu = 0.9;
    CHECK_THROWS_AS(validate(s), ValidationError);
    s = ring({Repress});
    s.genes[0].p0 = -1.0;
    CHECK_THROWS_AS(validate(s), ValidationError);
    CHECK_THROWS_AS(validate(NetworkSpec{}), ValidationError);
}

TEST_CASE("validate is idempotent", "[netmodel][property]") {
    const auto s = load_preset("example7");
    const auto &once = validate(s);
    CHECK(validate(once) == s);
}

TEST_CASE("preset parameter values", "[netmodel]") {
    for (const auto &p : kPresets) {
        INFO(p.name);
        CHECK(is_preset(p.name));
        CHECK_NOTHROW(validate(load_preset(p.name)));
    }
    CHECK_THROWS_AS(load_preset("nope"), UnknownPreset);

    const auto ce = load_preset("counterexample");
    REQUIRE(ce.size() == 3);
    CHECK(ce.nu == 2.0);
    for (const auto &g : ce.genes) {
        CHECK(g.a == 1.0);
        CHECK(g.b == 1.0);
        CHECK(g.c == 1.7498);
        CHECK(g.beta == 1.7498);
        CHECK(g.tau_r == 0.5);
        CHECK(g.tau_p == 0.5);
    }

    const auto h = load_preset("hes7_wild");
    REQUIRE(h.size() == 1);
    CHECK(h.genes[0].a == Approx(0.231).margin(5e-4));
    CHECK(h.genes[0].b == Approx(0.0347).margin(5e-5));
    CHECK(h.genes[0].c == 4.5);
    CHECK(h.genes[0].beta == 33.0);
    CHECK(h.genes[0].tau_p == 30.0);
    CHECK(h.genes[0].tau_r == 7.0);
    CHECK(h.nu == 2.0);
    // p0 inverts R^2 = c beta / (a b p0) at R = 21.5
    const double a = std::numbers::ln2 / 3.0;
    const double b = std::numbers::ln2 / 20.0;
    CHECK(h.genes[0].p0 == Approx(4.5 * 33.0 / (a * b * 21.5 * 21.5)).epsilon(1e-12));
    CHECK(h.genes[0].p0 == Approx(40.1).margin(0.05));

    const auto e7 = load_preset("example7");
    REQUIRE(e7.size() == 7);
    CHECK(e7.nu == 2.6);
    CHECK(e7.total_delay() / 7.0 == Approx(0.52).epsilon(1e-12));
    for (std::size_t i : {0u, 2u, 5u, 6u}) {
        CHECK(e7.genes[i].c == 1.92);
        CHECK(e7.genes[i].beta == 4.32);
    }
    for (std::size_t i : {1u, 3u, 4u}) {
        CHECK(e7.genes[i].c == 3.84);
        CHECK(e7.genes[i].beta == 2.16);
    }
    CHECK(load_preset("example7_nodelay").total_delay() == 0.0);
}
