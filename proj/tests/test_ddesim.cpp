#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "cyclosc/ddesim.hpp"
#include "cyclosc/io.hpp"
#include "cyclosc/mps_form.hpp"
#include "cyclosc/presets.hpp"
#include "oracles.hpp"

using namespace cyclosc;
using Catch::Approx;

namespace {

const std::vector<double> kOffsetHistory{0.699, 1.224, 0.698, 1.226, 0.697, 1.225};

Trajectory from_equilibrium(const NetworkSpec &spec, double eps, double t_end, IntegrateOptions opt = {}) {
    return integrate(spec, History::constant(equilibrium_state(solve_equilibrium(spec), eps)), t_end, opt);
}

double final_error(const Trajectory &a, const Trajectory &b) {
    const auto ra = a.row(a.steps() - 1);
    const auto rb = b.row(b.steps() - 1);
    double e = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) e = std::max(e, std::abs(ra[i] - rb[i]));
    return e;
}

} // namespace

TEST_CASE("counterexample oscillates from a slightly offset start", "[ddesim]") {
    const auto traj = integrate(load_preset("counterexample"), History::constant(kOffsetHistory), 100.0);
    CHECK(traj.classification == Classification::Oscillating);
    CHECK(traj.t.back() == 100.0);
}

TEST_CASE("example7 without delay converges", "[ddesim]") {
    const auto spec = load_preset("example7_nodelay");
    CHECK(from_equilibrium(spec, 0.01, 1000.0).classification == Classification::Converged);
    // The decay rate is about 0.02, far too slow to meet the variation
    // threshold after 50 time units.
    CHECK(from_equilibrium(spec, 0.01, 50.0).classification != Classification::Oscillating);
}

TEST_CASE("example7 with delay oscillates", "[ddesim]") {
    CHECK(from_equilibrium(load_preset("example7"), 0.01, 300.0).classification == Classification::Oscillating);
}

TEST_CASE("equilibrium history is stationary", "[ddesim][property]") {
    for (const auto &p : kPresets) {
        INFO(p.name);
        const auto spec = load_preset(p.name);
        const auto eq = solve_equilibrium(spec);
        const auto traj = from_equilibrium(spec, 0.0, 40.0 * slowest_timescale(spec));
        double level = 0.0;
        for (double v : equilibrium_state(eq)) level = std::max(level, v);
        double dev = 0.0;
        const auto ref = equilibrium_state(eq);
        for (std::size_t k = 0; k < traj.steps(); ++k) {
            for (std::size_t c = 0; c < ref.size(); ++c) dev = std::max(dev, std::abs(traj.state[k * ref.size() + c] - ref[c]));
        }
        CHECK(dev <= 1e-6 * level);
        CHECK(traj.classification == Classification::Converged);
    }
}

TEST_CASE("trajectories stay non-negative", "[ddesim][property]") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    for (const char *name : {"counterexample", "example7", "repressilator", "hes7_wild"}) {
        const auto spec = load_preset(name);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> h(2 * spec.size());
            for (auto &v : h) v = trial == 0 ? 0.0 : U(rng);
            IntegrateOptions opt;
            opt.classify = false;
            const auto traj = integrate(spec, History::constant(h), 25.0 * slowest_timescale(spec), opt);
            CHECK(*std::min_element(traj.state.begin(), traj.state.end()) >= -1e-9);
        }
    }
}

TEST_CASE("fourth-order convergence on the counterexample", "[ddesim][property]") {
    const auto spec = load_preset("counterexample");
    const auto hist = History::constant(kOffsetHistory);
    IntegrateOptions opt;
    opt.classify = false;
    const auto run = [&](double dt) {
        opt.dt = dt;
        return integrate(spec, hist, 10.0, opt);
    };
    const auto ref = run(0.05 / 32);
    const double e1 = final_error(run(0.05), ref);
    const double e2 = final_error(run(0.025), ref);
    const double e3 = final_error(run(0.0125), ref);
    INFO("errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 / e2 == Approx(16.0).margin(4.0));
    CHECK(e2 / e3 == Approx(16.0).margin(4.0));
}

TEST_CASE("integrator agrees with a fine Euler reference", "[ddesim]") {
    const auto spec = load_preset("counterexample");
    IntegrateOptions opt;
    opt.classify = false;
    const auto traj = integrate(spec, History::constant(kOffsetHistory), 3.0, opt);
    const auto ref = oracle::euler_ring(3, 1.0, 1.0, 1.7498, 1.7498, 2.0, 0.5, kOffsetHistory, 3.0, 1e-5);
    const auto last = traj.row(traj.steps() - 1);
    for (std::size_t c = 0; c < 6; ++c) CHECK(last[c] == Approx(ref[c]).margin(1e-4));
}

TEST_CASE("sampled history matches the constant history it samples", "[ddesim]") {
    const auto spec = load_preset("counterexample");
    IntegrateOptions opt;
    opt.classify = false;
    const auto a = integrate(spec, History::constant(kOffsetHistory), 5.0, opt);
    const auto b = integrate(spec, History::sampled({-1.0, 0.0}, {kOffsetHistory, kOffsetHistory}), 5.0, opt);
    REQUIRE(a.state.size() == b.state.size());
    double diff = 0.0;
    for (std::size_t k = 0; k < a.state.size(); ++k) diff = std::max(diff, std::abs(a.state[k] - b.state[k]));
    // linear interpolation between equal rows may differ in the last bit
    CHECK(diff <= 1e-13);
    CHECK(History::sampled({-1.0, 1.0}, {{0.0}, {2.0}}).value(0, 0.5) == Approx(1.5));
}

TEST_CASE("default step and uniform grid", "[ddesim]") {
    const auto spec = load_preset("counterexample");
    CHECK(default_step(spec, 100.0) == Approx(0.001));
    CHECK(default_step(spec, 1e6) == Approx(0.025));
    CHECK(default_step(load_preset("example7_nodelay"), 1e6) == Approx(1.0 / 4.8 / 20.0));
    IntegrateOptions opt;
    opt.classify = false;
    opt.dt = 0.03;
    const auto traj = integrate(spec, History::constant(kOffsetHistory), 1.0, opt);
    CHECK(traj.t.back() == 1.0);
    for (std::size_t k = 1; k < traj.steps(); ++k) CHECK(traj.t[k] - traj.t[k - 1] == Approx(traj.dt).epsilon(1e-12));
    CHECK(traj.dt <= 0.03);
}

TEST_CASE("integrator input errors", "[ddesim]") {
    const auto spec = load_preset("counterexample");
    const auto h = History::constant(kOffsetHistory);
    IntegrateOptions opt;
    opt.classify = false;
    CHECK_THROWS_AS(integrate(spec, h, 0.0, opt), DomainError);
    opt.dt = -1.0;
    CHECK_THROWS_AS(integrate(spec, h, 1.0, opt), DomainError);
    opt.dt = 0.6;
    CHECK_THROWS_AS(integrate(spec, h, 1.0, opt), DomainError);
    opt.dt.reset();
    CHECK_THROWS_AS(integrate(spec, History::constant({1.0, 1.0}), 1.0, opt), DomainError);
    CHECK_THROWS_AS(integrate(spec, History::sampled({-0.2, 0.0}, {kOffsetHistory, kOffsetHistory}), 1.0, opt),
                    DomainError);
    CHECK_THROWS_AS(History::constant({1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(History::sampled({0.0, -1.0}, {{1.0}, {1.0}}), DomainError);
}

TEST_CASE("blow-up reports the last valid time", "[ddesim]") {
    auto spec = load_preset("example7_nodelay");
    for (auto &g : spec.genes) g.a = 1000.0;
    IntegrateOptions opt;
    opt.classify = false;
    opt.dt = 0.01;
    try {
        integrate(spec, History::constant(std::vector<double>(14, 1.0)), 100.0, opt);
        FAIL("expected a blow-up");
    } catch (const SimulationError &e) {
        CHECK(e.last_valid_time() > 0.0);
        CHECK(e.last_valid_time() < 100.0);
    }
}

TEST_CASE("classify edge cases", "[ddesim]") {
    Trajectory flat;
    flat.N = 1;
    flat.dt = 1.0;
    flat.timescale = 1.0;
    for (int k = 0; k <= 100; ++k) {
        flat.t.push_back(k);
        flat.state.push_back(2.0);
        flat.state.push_back(3.0);
    }
    CHECK(classify(flat) == Classification::Converged);

    auto sine = flat;
    for (int k = 0; k <= 100; ++k) sine.state[2 * k + 1] = 3.0 + std::sin(k * 0.7);
    CHECK(classify(sine) == Classification::Oscillating);

    auto ramp = flat;
    for (int k = 0; k <= 100; ++k) ramp.state[2 * k + 1] = 1.0 + k;
    CHECK(classify(ramp) == Classification::Undetermined);

    auto shortrun = flat;
    shortrun.timescale = 10.0;
    CHECK_THROWS_AS(classify(shortrun), DomainError);
}

TEST_CASE("monotone cyclic form of the counterexample", "[ddesim][mps]") {
    const auto rep = mps_form_check(load_preset("counterexample"), 200);
    REQUIRE(rep.applicable);
    CHECK(rep.T == Approx(3.0));
    CHECK(rep.rho == std::vector<int>{-1, 1, -1, 1, -1, 1});
    CHECK(rep.z_star == -1);
    CHECK(rep.matches_cycle_sign);
    CHECK(rep.all_positive);
    CHECK(rep.min_signed_partial > 0.0);
    // sigma_k is the running product of rho_2..rho_k
    int acc = 1;
    for (std::size_t k = 1; k < rep.sigma.size(); ++k) {
        acc *= rep.rho[k];
        CHECK(rep.sigma[k] == acc);
    }
}

TEST_CASE("monotone cyclic form with mixed regulation", "[ddesim][mps]") {
    NetworkSpec s;
    s.nu = 2.0;
    GeneSpec g;
    g.tau_r = 0.3;
    g.regulation = Regulation::Activate;
    s.genes.push_back(g);
    g.regulation = Regulation::Repress;
    s.genes.push_back(g);
    const auto rep = mps_form_check(s, 100);
    CHECK(rep.z_star == -1);
    CHECK(rep.all_positive);
    CHECK(std::count(rep.rho.begin(), rep.rho.end(), -1) == 1);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.1, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        NetworkSpec r;
        r.nu = 1.0 + U(rng);
        const std::size_t N = 1 + rng() % 6;
        for (std::size_t i = 0; i < N; ++i) {
            GeneSpec q{U(rng), U(rng), U(rng), U(rng), U(rng), U(rng), Regulation::Repress, 0.1 * U(rng), U(rng)};
            if (i + 1 < N && rng() % 2) q.regulation = Regulation::Activate;
            r.genes.push_back(q);
        }
        if (r.cycle_sign() != -1) r.genes.back().regulation = Regulation::Activate;
        const auto rr = mps_form_check(r, 20, trial);
        CHECK(rr.matches_cycle_sign);
        CHECK(rr.all_positive);
    }
}

TEST_CASE("monotone cyclic form needs a delay", "[ddesim][mps]") {
    const auto rep = mps_form_check(load_preset("example7_nodelay"), 10);
    CHECK_FALSE(rep.applicable);
    CHECK(rep.T == 0.0);
}
