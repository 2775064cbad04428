#include "cli.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cyclosc/cyclosc.hpp"

namespace cyclosc::cli {
namespace {

/// Malformed flags that CLI11 cannot detect on its own.
struct UsageError : Error {
    using Error::Error;
};

/// Error tagged with the pipeline stage that raised it.
struct StageError : Error {
    StageError(std::string stage, int code, const std::string &what)
        : Error(what), stage(std::move(stage)), code(code) {}
    std::string stage;
    int code;
};

/// Run `fn`, mapping library errors to exit codes for `stage`.
template <class Fn>
auto in_stage(const std::string &stage, Fn &&fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError &) {
        throw;
    } catch (const UsageError &e) {
        throw StageError(stage, kExitUsage, e.what());
    } catch (const IoError &e) {
        throw StageError(stage, stage == "write" ? kExitCantCreate : kExitNoInput, e.what());
    } catch (const UnknownPreset &e) {
        throw StageError(stage, kExitUsage, e.what());
    } catch (const ValidationError &e) {
        throw StageError(stage, kExitData, e.what());
    } catch (const DomainError &e) {
        throw StageError(stage, stage == "input" ? kExitData : kExitSoftware, e.what());
    } catch (const Error &e) {
        throw StageError(stage, kExitSoftware, e.what());
    }
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num(const std::optional<double> &v) { return v ? num(*v) : json(nullptr); }

struct Tolerances {
    EquilibriumOptions eq;
    StabilityTolerances st;
    NyquistOptions nyq;
    ClassifyOptions cls;
};

/// --tol scales every default proportionally (the equilibrium default is the
/// reference); --config then overrides individual entries.
Tolerances make_tolerances(const std::optional<double> &tol, const std::string &config) {
    Tolerances t;
    if (tol) {
        if (!(*tol > 0.0)) throw UsageError("--tol must be > 0");
        const double k = *tol / t.eq.tol;
        t.eq.tol = *tol;
        t.st.scalar *= k;
        t.st.newton *= k;
        t.st.tie *= k;
    }
    if (config.empty()) return t;
    json doc;
    try {
        doc = json::parse(read_file(config));
    } catch (const json::parse_error &e) {
        throw DomainError(config + ": " + e.what());
    }
    if (!doc.is_object()) throw DomainError(config + ": expected an object");
    const auto positive = [&](const json &v, const std::string &key) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) throw DomainError(config + ": '" + key + "' must be a positive number");
        return v.get<double>();
    };
    for (const auto &[key, v] : doc.items()) {
        if (key == "equilibrium") {
            t.eq.tol = positive(v, key);
        } else if (key == "scalar") {
            t.st.scalar = positive(v, key);
        } else if (key == "newton") {
            t.st.newton = positive(v, key);
        } else if (key == "tie") {
            t.st.tie = positive(v, key);
        } else if (key == "nyquist_samples") {
            t.nyq.n = static_cast<std::size_t>(positive(v, key));
        } else if (key == "classify") {
            if (!v.is_object()) throw DomainError(config + ": 'classify' must be an object");
            for (const auto &[ck, cv] : v.items()) {
                if (ck == "variation") {
                    t.cls.variation_tol = positive(cv, ck);
                } else if (ck == "amplitude") {
                    t.cls.amplitude_tol = positive(cv, ck);
                } else if (ck == "cv") {
                    t.cls.cv_tol = positive(cv, ck);
                } else if (ck == "min_peaks") {
                    t.cls.min_peaks = static_cast<std::size_t>(positive(cv, ck));
                } else {
                    throw DomainError(config + ": unknown classify key '" + ck + "'");
                }
            }
        } else {
            throw DomainError(config + ": unknown key '" + key + "'");
        }
    }
    return t;
}

NetworkSpec load_source(const std::string &spec_file, const std::string &preset) {
    if (spec_file.empty() == preset.empty()) throw UsageError("exactly one of --spec or --preset is required");
    NetworkSpec spec = spec_file.empty() ? load_preset(preset) : load_spec_file(spec_file);
    validate(spec);
    return spec;
}

std::vector<Method> parse_methods(const std::string &text) {
    if (text == "all") return {Method::Analytic, Method::Graphical, Method::Roots, Method::Nyquist};
    std::vector<Method> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "analytic") {
            out.push_back(Method::Analytic);
        } else if (item == "graphical") {
            out.push_back(Method::Graphical);
        } else if (item == "roots") {
            out.push_back(Method::Roots);
        } else if (item == "nyquist") {
            out.push_back(Method::Nyquist);
        } else {
            throw UsageError("unknown method '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("--methods is empty");
    return out;
}

json witness_json(const Witness &w) { return {{"omega_sharp", num(w.omega_sharp)}, {"omega_star", num(w.omega_star)}}; }

int exit_code(Outcome o) {
    switch (o) {
    case Outcome::OscillationsGuaranteed: return 0;
    case Outcome::LocallyStable: return 1;
    case Outcome::Inconclusive: return 2;
    }
    return 2;
}

/// Agreement of the definitive verdicts; any disagreement is Inconclusive.
Outcome consensus(const std::vector<Verdict> &vs) {
    std::optional<Outcome> agreed;
    for (const auto &v : vs) {
        if (v.outcome == Outcome::Inconclusive) continue;
        if (agreed && *agreed != v.outcome) return Outcome::Inconclusive;
        agreed = v.outcome;
    }
    return agreed.value_or(Outcome::Inconclusive);
}

struct AnalyzeArgs {
    std::string spec_file, preset, methods = "analytic", config, out;
    std::optional<double> tol;
};

int do_analyze(const AnalyzeArgs &a, std::ostream &out) {
    const auto spec = in_stage("input", [&] { return load_source(a.spec_file, a.preset); });
    const auto methods = in_stage("input", [&] { return parse_methods(a.methods); });
    const auto tols = in_stage("input", [&] { return make_tolerances(a.tol, a.config); });

    json report;
    report["tool"] = {{"name", "cyclosc"}, {"version", kVersion}};
    report["spec"] = to_json(spec);

    const auto eq = in_stage("equilibrium", [&] { return solve_equilibrium(spec, tols.eq); });
    report["equilibrium"] = {{"r_star", eq.r_star}, {"p_star", eq.p_star}, {"zeta", eq.zeta}, {"residual", eq.residual}};

    std::optional<ReducedModel> rm;
    double l_bar = std::numeric_limits<double>::quiet_NaN();
    if (is_homogeneous(spec)) {
        rm = in_stage("linearization", [&] { return reduce(spec, eq); });
        json eig = json::array();
        for (const auto &l : rm->lambda) eig.push_back({l.real(), l.imag()});
        report["reduced"] = {{"N", rm->N},       {"Q", rm->Q},     {"tau", rm->tau},   {"tau_tilde", rm->tau_tilde},
                             {"T_r", rm->T_r},   {"T_p", rm->T_p}, {"T_A", rm->T_A},   {"T_G", rm->T_G},
                             {"R", rm->R},       {"gain", rm->gain}, {"L", rm->L},     {"eigenvalues", eig}};
        in_stage("thresholds", [&] {
            const double w = threshold_W(rm->N, rm->Q);
            l_bar = critical_gain(rm->N, rm->Q, rm->tau_tilde, tols.st.scalar);
            const auto ratio = [&](double lb) -> json {
                try {
                    return num(critical_ratio(spec.nu, lb));
                } catch (const NotApplicable &) {
                    return "not-applicable";
                }
            };
            report["thresholds"] = {{"W", num(w)},
                                    {"L_bar", num(l_bar)},
                                    {"R_bar", ratio(l_bar)},
                                    {"L_bar_no_delay", num(w)},
                                    {"R_bar_no_delay", ratio(w)}};
        });
    } else {
        report["reduced"] = nullptr;
        report["thresholds"] = nullptr;
    }

    std::vector<Verdict> verdicts;
    json vjson = json::array();
    for (auto m : methods) {
        const std::string stage = "stability:" + std::string(to_string(m));
        Verdict v;
        v.method = m;
        json extra = json::object();
        if (m == Method::Nyquist) {
            const auto res = in_stage(stage, [&] { return nyquist_winding(spec, eq, tols.nyq); });
            v = verdict_from_winding(res);
            extra["winding"] = res.winding;
            extra["resolved"] = res.resolved;
        } else if (!rm) {
            extra["note"] = "degradation rates differ between genes; only nyquist applies";
        } else if (m == Method::Analytic) {
            v = in_stage(stage, [&] { return test_analytic(*rm, tols.st); });
        } else if (m == Method::Graphical) {
            v = in_stage(stage, [&] { return test_graphical(*rm, tols.st); });
        } else {
            const auto cr = in_stage(stage, [&] { return characteristic_roots(*rm, std::nullopt, tols.st.newton); });
            v.method = Method::Roots;
            if (cr.dominant) {
                v.margin = cr.dominant->real();
                v.outcome = outcome_from_margin(v.margin, tols.st.tie);
                extra["dominant_root"] = {cr.dominant->real(), cr.dominant->imag()};
            }
            extra["root_count"] = cr.roots.size();
        }
        json j = {{"method", std::string(to_string(v.method))},
                  {"outcome", std::string(to_string(v.outcome))},
                  {"margin", num(v.margin)},
                  {"witness", witness_json(v.witness)}};
        if (rm) {
            j["L"] = rm->L;
            j["L_bar"] = num(l_bar);
            j["Q"] = rm->Q;
            j["tau_tilde"] = rm->tau_tilde;
            j["N"] = rm->N;
        }
        j.update(extra);
        vjson.push_back(j);
        verdicts.push_back(v);
    }
    report["verdicts"] = vjson;
    const Outcome overall = consensus(verdicts);
    report["outcome"] = std::string(to_string(overall));

    const std::string text = report.dump(2) + "\n";
    if (a.out.empty()) {
        out << text;
    } else {
        in_stage("write", [&] { write_atomic(a.out, text); });
    }
    out << to_string(overall) << '\n';
    return exit_code(overall);
}

struct SimulateArgs {
    std::string spec_file, preset, history = "equilibrium+1%", out, config;
    double t_end = 0.0;
    std::optional<double> dt;
    std::size_t stride = 1;
};

int do_simulate(const SimulateArgs &a, std::ostream &out, std::ostream &err) {
    const auto spec = in_stage("input", [&] { return load_source(a.spec_file, a.preset); });
    const auto hist = in_stage("input", [&] { return parse_history(a.history, spec); });
    const auto tols = in_stage("input", [&] { return make_tolerances(std::nullopt, a.config); });
    if (a.stride == 0) throw StageError("input", kExitUsage, "--stride must be >= 1");
    IntegrateOptions opt;
    opt.dt = a.dt;
    opt.classify = false;
    auto traj = in_stage("simulation", [&] { return integrate(spec, hist, a.t_end, opt); });
    std::string label;
    try {
        label = std::string(to_string(classify(traj, tols.cls)));
    } catch (const DomainError &e) {
        label = "Undetermined";
        err << "cyclosc: " << e.what() << '\n';
    }
    if (!a.out.empty()) in_stage("write", [&] { write_atomic(a.out, trajectory_csv(traj, a.stride)); });
    out << label << '\n';
    return 0;
}

struct SweepArgs {
    std::string tmpl, x, y, out, boundary, config;
    std::optional<double> tol;
    double boundary_tol = 1e-8;
};

int do_sweep(const SweepArgs &a, std::ostream &out) {
    const auto spec = in_stage("input", [&] {
        NetworkSpec s = std::filesystem::exists(a.tmpl) || !is_preset(a.tmpl) ? load_spec_file(a.tmpl) : load_preset(a.tmpl);
        validate(s);
        return s;
    });
    const auto axes = in_stage("input", [&] {
        try {
            return std::pair{parse_axis(a.x), parse_axis(a.y)};
        } catch (const DomainError &e) {
            throw UsageError(e.what());
        }
    });
    const auto tols = in_stage("input", [&] { return make_tolerances(a.tol, a.config); });
    auto grid = in_stage("sweep", [&] { return scan(spec, axes.first, axes.second, tols.st); });
    if (!a.boundary.empty()) grid.boundary = in_stage("boundary", [&] { return trace_boundary(grid, a.boundary_tol, tols.st); });

    std::map<std::string, std::size_t> counts;
    for (const auto &c : grid.cells) ++counts[std::string(cell_label(c))];
    json meta = {{"x", axis_json(grid.x)}, {"y", axis_json(grid.y)}, {"template", to_json(spec)}, {"counts", counts}};
    in_stage("write", [&] {
        write_atomic(a.out, grid_csv(grid));
        write_atomic(a.out + ".json", meta.dump(2) + "\n");
        if (!a.boundary.empty()) write_atomic(a.boundary, boundary_csv(grid.boundary));
    });
    for (const auto &[k, n] : counts) out << k << ' ' << n << '\n';
    if (!a.boundary.empty()) out << "boundary points " << grid.boundary.size() << '\n';
    return 0;
}

struct NyquistArgs {
    std::string spec_file, preset, out;
    double omega_max = 0.0;
    std::size_t n = 4096;
};

int do_nyquist(const NyquistArgs &a, std::ostream &out) {
    const auto spec = in_stage("input", [&] { return load_source(a.spec_file, a.preset); });
    const auto eq = in_stage("equilibrium", [&] { return solve_equilibrium(spec); });
    NyquistOptions opt;
    opt.omega_max = a.omega_max;
    opt.n = a.n;
    const auto res = in_stage("nyquist", [&] { return nyquist_winding(spec, eq, opt); });
    if (!a.out.empty()) {
        std::string csv = "omega,re,im\n";
        for (const auto &s : res.samples) {
            csv += format_double(s.omega) + ',' + format_double(s.value.real()) + ',' + format_double(s.value.imag()) + '\n';
        }
        in_stage("write", [&] { write_atomic(a.out, csv); });
    }
    out << "winding " << res.winding << (res.resolved ? "" : " (unresolved)") << '\n';
    return 0;
}

struct BoundaryArgs {
    std::size_t N = 0;
    double Q = 1.0, tau_tilde = 0.0, omega_max = 10.0;
    std::size_t n = 2001;
    std::optional<double> L;
    std::string out, ring;
};

int do_boundary(const BoundaryArgs &a, std::ostream &out) {
    if (!a.ring.empty() && !a.L) throw StageError("input", kExitUsage, "--ring needs --L");
    const auto pts = in_stage("boundary", [&] {
        try {
            return boundary_samples(a.Q, a.tau_tilde, a.omega_max, a.n);
        } catch (const DomainError &e) {
            throw UsageError(e.what());
        }
    });
    std::string csv = "omega_tilde,re,im\n";
    for (const auto &p : pts) csv += format_double(p.omega_tilde) + ',' + format_double(p.z.real()) + ',' + format_double(p.z.imag()) + '\n';
    in_stage("write", [&] { write_atomic(a.out, csv); });
    if (a.L) {
        if (a.N < 1 || !(*a.L >= 0.0)) throw StageError("input", kExitUsage, "--N >= 1 and --L >= 0 required");
        const auto lam = ring_eigenvalues(a.N, *a.L);
        if (!a.ring.empty()) {
            std::string rc = "k,re,im\n";
            for (std::size_t k = 0; k < lam.size(); ++k) {
                rc += std::to_string(k + 1) + ',' + format_double(lam[k].real()) + ',' + format_double(lam[k].imag()) + '\n';
            }
            in_stage("write", [&] { write_atomic(a.ring, rc); });
        }
        const auto rm = reduced_from_groups(a.N, a.Q, a.tau_tilde, *a.L);
        const auto v = in_stage("stability:graphical", [&] { return test_graphical(rm); });
        out << to_string(v.outcome) << '\n';
        return exit_code(v.outcome);
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Oscillation analysis for cyclic gene regulatory networks with delays", "cyclosc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    AnalyzeArgs an;
    auto *analyze = app.add_subcommand("analyze", "Equilibrium, reduction and stability verdicts as a JSON report");
    analyze->add_option("--spec", an.spec_file, "Network spec JSON file");
    analyze->add_option("--preset", an.preset, "Built-in network");
    analyze->add_option("--methods", an.methods, "analytic,graphical,roots,nyquist or all");
    analyze->add_option("--tol", an.tol, "Tolerance knob; scales every default");
    analyze->add_option("--config", an.config, "JSON file overriding individual tolerances");
    analyze->add_option("--out", an.out, "Report path (stdout when omitted)");

    SimulateArgs si;
    auto *simulate = app.add_subcommand("simulate", "Integrate the delayed network and classify the long-run behaviour");
    simulate->add_option("--spec", si.spec_file, "Network spec JSON file");
    simulate->add_option("--preset", si.preset, "Built-in network");
    simulate->add_option("--t-end", si.t_end, "Final time")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--dt", si.dt, "Fixed step")->check(CLI::PositiveNumber);
    simulate->add_option("--history", si.history, "const:v1,...,v2N | file.csv | equilibrium+EPS%");
    simulate->add_option("--stride", si.stride, "Write every k-th row");
    simulate->add_option("--config", si.config, "JSON file overriding classification thresholds");
    simulate->add_option("--out", si.out, "Trajectory CSV path");

    SweepArgs sw;
    auto *sweep = app.add_subcommand("sweep", "Analytic verdict over a two-parameter grid");
    sweep->add_option("--template", sw.tmpl, "Spec JSON file or preset name")->required();
    sweep->add_option("--x", sw.x, "param:lo:hi:n[:log]")->required();
    sweep->add_option("--y", sw.y, "param:lo:hi:n[:log]")->required();
    sweep->add_option("--out", sw.out, "Grid CSV path")->required();
    sweep->add_option("--boundary", sw.boundary, "Boundary CSV path");
    sweep->add_option("--boundary-tol", sw.boundary_tol, "Margin tolerance of refined boundary points")->check(CLI::PositiveNumber);
    sweep->add_option("--tol", sw.tol, "Tolerance knob; scales every default");
    sweep->add_option("--config", sw.config, "JSON file overriding individual tolerances");

    NyquistArgs ny;
    auto *nyquist = app.add_subcommand("nyquist", "Loop transfer samples and winding number");
    nyquist->add_option("--spec", ny.spec_file, "Network spec JSON file");
    nyquist->add_option("--preset", ny.preset, "Built-in network");
    nyquist->add_option("--omega-max", ny.omega_max, "Largest frequency (automatic when omitted)")->check(CLI::PositiveNumber);
    nyquist->add_option("--n", ny.n, "Base sample count")->check(CLI::Range(4, 10000000));
    nyquist->add_option("--out", ny.out, "Curve CSV path");

    BoundaryArgs bd;
    auto *boundary = app.add_subcommand("boundary", "Samples of the instability-region boundary");
    boundary->add_option("--N", bd.N, "Number of genes")->required()->check(CLI::PositiveNumber);
    boundary->add_option("--Q", bd.Q, "Time-constant ratio in (0, 1]")->required();
    boundary->add_option("--tau-tilde", bd.tau_tilde, "Normalized delay")->required();
    boundary->add_option("--omega-max", bd.omega_max, "Largest normalized frequency");
    boundary->add_option("--n", bd.n, "Samples on [0, omega-max]")->check(CLI::Range(2, 10000000));
    boundary->add_option("--L", bd.L, "Average gain; adds the eigenvalue ring and a verdict");
    boundary->add_option("--ring", bd.ring, "Eigenvalue CSV path (needs --L)");
    boundary->add_option("--out", bd.out, "Curve CSV path")->required();

    auto *presets = app.add_subcommand("presets", "Built-in networks");
    presets->require_subcommand(1);
    auto *plist = presets->add_subcommand("list", "Names and descriptions");
    std::string show_name;
    auto *pshow = presets->add_subcommand("show", "Print a preset as spec JSON");
    pshow->add_option("name", show_name)->required();

    std::vector<const char *> argv;
    for (const auto &s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analyze) return do_analyze(an, out);
        if (*simulate) return do_simulate(si, out, err);
        if (*sweep) return do_sweep(sw, out);
        if (*nyquist) return do_nyquist(ny, out);
        if (*boundary) return do_boundary(bd, out);
        if (*plist) {
            for (const auto &p : kPresets) out << p.name << "  " << p.description << '\n';
            return 0;
        }
        if (*pshow) {
            const auto spec = in_stage("input", [&] { return load_preset(show_name); });
            out << to_json(spec).dump(2) << '\n';
            return 0;
        }
    } catch (const StageError &e) {
        if (e.code == kExitUsage) {
            err << "cyclosc: " << e.what() << "\n" << app.help();
        } else {
            err << "cyclosc: " << e.stage << " failed: " << e.what() << '\n';
        }
        return e.code;
    } catch (const std::exception &e) {
        err << "cyclosc: internal error: " << e.what() << '\n';
        return kExitSoftware;
    }
    return kExitUsage;
}

} // namespace cyclosc::cli
