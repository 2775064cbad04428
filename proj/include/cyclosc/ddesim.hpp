#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "cyclosc/errors.hpp"
#include "cyclosc/hill.hpp"
#include "cyclosc/network.hpp"

namespace cyclosc {

/// Initial data on [-max delay, 0]. Components are interleaved
/// [r1, p1, r2, p2, ...].
class History {
  public:
    static History constant(std::vector<double> values) {
        for (double v : values) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("history: constant values must be finite and >= 0");
        }
        History h;
        h.values_ = std::move(values);
        return h;
    }

    /// Linearly interpolated samples; `rows[k]` holds the state at `times[k]`.
    static History sampled(std::vector<double> times, std::vector<std::vector<double>> rows) {
        if (times.empty() || times.size() != rows.size()) throw DomainError("history: one row per sample time");
        for (std::size_t k = 1; k < times.size(); ++k) {
            if (!(times[k] > times[k - 1])) throw DomainError("history: sample times must be strictly increasing");
        }
        const std::size_t width = rows.front().size();
        for (const auto &r : rows) {
            if (r.size() != width) throw DomainError("history: rows must have equal width");
        }
        History h;
        h.times_ = std::move(times);
        h.rows_ = std::move(rows);
        return h;
    }

    [[nodiscard]] bool is_constant() const noexcept { return times_.empty(); }
    [[nodiscard]] std::size_t width() const noexcept { return is_constant() ? values_.size() : rows_.front().size(); }

    /// Earliest and latest covered times.
    [[nodiscard]] double start() const noexcept {
        return is_constant() ? -std::numeric_limits<double>::infinity() : times_.front();
    }
    [[nodiscard]] double end() const noexcept { return is_constant() ? 0.0 : times_.back(); }

    [[nodiscard]] double value(std::size_t comp, double t) const {
        if (is_constant()) return values_[comp];
        if (t <= times_.front()) return rows_.front()[comp];
        if (t >= times_.back()) return rows_.back()[comp];
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
        const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
        return (1.0 - w) * rows_[k][comp] + w * rows_[k + 1][comp];
    }

  private:
    std::vector<double> values_;
    std::vector<double> times_;
    std::vector<std::vector<double>> rows_;
};

enum class Classification { Oscillating, Converged, Undetermined };

inline std::string_view to_string(Classification c) {
    switch (c) {
    case Classification::Oscillating: return "Oscillating";
    case Classification::Converged: return "Converged";
    case Classification::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

/// Uniform-step solution. Row k of `state` holds [r1, p1, ..., rN, pN] at t = k dt.
struct Trajectory {
    std::size_t N = 0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> state;
    double timescale = 0.0; ///< max(T_r, T_p, average loop delay) of the simulated spec
    Classification classification = Classification::Undetermined;

    [[nodiscard]] std::size_t steps() const noexcept { return t.size(); }
    [[nodiscard]] double r(std::size_t k, std::size_t gene) const { return state[k * 2 * N + 2 * gene]; }
    [[nodiscard]] double p(std::size_t k, std::size_t gene) const { return state[k * 2 * N + 2 * gene + 1]; }
    [[nodiscard]] std::vector<double> row(std::size_t k) const {
        return {state.begin() + static_cast<std::ptrdiff_t>(k * 2 * N),
                state.begin() + static_cast<std::ptrdiff_t>((k + 1) * 2 * N)};
    }
};

/// Thresholds for the long-run behaviour label.
struct ClassifyOptions {
    double variation_tol = 1e-6; ///< last-quarter total variation relative to the mean level
    double amplitude_tol = 1e-3; ///< peak-to-trough relative to the mean level
    double cv_tol = 0.2;         ///< coefficient of variation of inter-peak intervals
    std::size_t min_peaks = 3;
    double min_span = 20.0;      ///< required horizon in units of Trajectory::timescale
};

/// Label the second half of the trajectory of p1.
inline Classification classify(const Trajectory &traj, const ClassifyOptions &opt = {}) {
    if (traj.steps() < 8) throw DomainError("classify: trajectory too short");
    const double span = traj.t.back() - traj.t.front();
    if (span < opt.min_span * traj.timescale) {
        throw DomainError("classify: trajectory must cover at least " + std::to_string(opt.min_span) +
                          " times the slowest timescale");
    }
    const std::size_t n = traj.steps();
    const std::size_t half = n / 2;
    const std::size_t quarter = n - n / 4;

    double mean = 0.0;
    for (std::size_t k = half; k < n; ++k) mean += traj.p(k, 0);
    mean /= static_cast<double>(n - half);
    const double level = std::abs(mean);

    double variation = 0.0;
    for (std::size_t k = quarter + 1; k < n; ++k) variation += std::abs(traj.p(k, 0) - traj.p(k - 1, 0));
    if (variation <= opt.variation_tol * level) return Classification::Converged;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> peak_times;
    for (std::size_t k = half; k < n; ++k) {
        const double x = traj.p(k, 0);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        if (k > half && k + 1 < n) {
            const double prev = traj.p(k - 1, 0);
            const double next = traj.p(k + 1, 0);
            if (x > prev && x >= next && x > mean) peak_times.push_back(traj.t[k]);
        }
    }
    if (peak_times.size() < opt.min_peaks || hi - lo < opt.amplitude_tol * level) {
        return Classification::Undetermined;
    }
    std::vector<double> gaps;
    for (std::size_t k = 1; k < peak_times.size(); ++k) gaps.push_back(peak_times[k] - peak_times[k - 1]);
    double gm = 0.0;
    for (double g : gaps) gm += g;
    gm /= static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - gm) * (g - gm);
    var /= static_cast<double>(gaps.size());
    const double cv = std::sqrt(var) / gm;
    return cv <= opt.cv_tol ? Classification::Oscillating : Classification::Undetermined;
}

struct IntegrateOptions {
    std::optional<double> dt;
    bool classify = true;
    ClassifyOptions classify_options;
};

/// max(T_r, T_p, average loop delay) over the genes.
inline double slowest_timescale(const NetworkSpec &spec) {
    double ts = spec.total_delay() / static_cast<double>(std::max<std::size_t>(1, spec.size()));
    for (const auto &g : spec.genes) ts = std::max({ts, 1.0 / g.a, 1.0 / g.b});
    return ts;
}

/// Default step: min(smallest positive delay / 20, smallest time constant / 20, t_end / 1e5).
inline double default_step(const NetworkSpec &spec, double t_end) {
    double dt = t_end / 1e5;
    for (const auto &g : spec.genes) {
        dt = std::min({dt, 1.0 / g.a / 20.0, 1.0 / g.b / 20.0});
        if (g.tau_r > 0.0) dt = std::min(dt, g.tau_r / 20.0);
        if (g.tau_p > 0.0) dt = std::min(dt, g.tau_p / 20.0);
    }
    return dt;
}

namespace detail {

/// Method-of-steps RK4 with cubic Hermite lookups of the stored solution.
class DdeStepper {
  public:
    DdeStepper(const NetworkSpec &spec, const History &hist, double dt, std::size_t n_steps)
        : spec_(spec), hist_(hist), dt_(dt), dim_(2 * spec.size()) {
        y_.reserve((n_steps + 1) * dim_);
        f_.reserve((n_steps + 1) * dim_);
        for (std::size_t c = 0; c < dim_; ++c) y_.push_back(hist.value(c, 0.0));
    }

    void run(std::size_t n_steps) {
        std::vector<double> k1(dim_), k2(dim_), k3(dim_), k4(dim_), tmp(dim_);
        for (std::size_t n = 0; n < n_steps; ++n) {
            const double t = static_cast<double>(n) * dt_;
            const double *y = &y_[n * dim_];
            rhs(t, y, k1.data());
            f_.insert(f_.end(), k1.begin(), k1.end());
            for (std::size_t c = 0; c < dim_; ++c) tmp[c] = y[c] + 0.5 * dt_ * k1[c];
            rhs(t + 0.5 * dt_, tmp.data(), k2.data());
            for (std::size_t c = 0; c < dim_; ++c) tmp[c] = y[c] + 0.5 * dt_ * k2[c];
            rhs(t + 0.5 * dt_, tmp.data(), k3.data());
            for (std::size_t c = 0; c < dim_; ++c) tmp[c] = y[c] + dt_ * k3[c];
            rhs(t + dt_, tmp.data(), k4.data());
            bool finite = true;
            for (std::size_t c = 0; c < dim_; ++c) {
                tmp[c] = y_[n * dim_ + c] + dt_ / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
                finite = finite && std::isfinite(tmp[c]);
            }
            if (!finite) throw SimulationError("integrate: non-finite state", t);
            y_.insert(y_.end(), tmp.begin(), tmp.end());
        }
    }

    std::vector<double> take_states() { return std::move(y_); }

  private:
    /// Component `comp` at time tq <= current time.
    [[nodiscard]] double past(std::size_t comp, double tq) const {
        if (tq <= 0.0) return hist_.value(comp, tq);
        const std::size_t stored = y_.size() / dim_;
        const std::size_t with_deriv = f_.size() / dim_;
        std::size_t k = static_cast<std::size_t>(tq / dt_);
        const std::size_t last_interval = std::min(stored, with_deriv) - 1;
        if (k >= last_interval) k = last_interval - 1;
        const double theta = (tq - static_cast<double>(k) * dt_) / dt_;
        const double y0 = y_[k * dim_ + comp];
        const double y1 = y_[(k + 1) * dim_ + comp];
        const double m0 = f_[k * dim_ + comp];
        const double m1 = f_[(k + 1) * dim_ + comp];
        const double t2 = theta * theta;
        const double t3 = t2 * theta;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + theta) * dt_ * m0 + (-2.0 * t3 + 3.0 * t2) * y1 +
               (t3 - t2) * dt_ * m1;
    }

    void rhs(double t, const double *y, double *out) const {
        const std::size_t n = spec_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto &g = spec_.genes[i];
            const std::size_t up = spec_.upstream(i);
            const double tau_in = spec_.genes[up].tau_p;
            const double p_in = tau_in > 0.0 ? past(2 * up + 1, t - tau_in) : y[2 * up + 1];
            const double r_del = g.tau_r > 0.0 ? past(2 * i, t - g.tau_r) : y[2 * i];
            const double f = hill_eval(g.regulation, std::max(p_in, 0.0), spec_.nu, g.p0).value;
            out[2 * i] = -g.a * y[2 * i] + g.beta * f + g.alpha0;
            out[2 * i + 1] = -g.b * y[2 * i + 1] + g.c * r_del;
        }
    }

    const NetworkSpec &spec_;
    const History &hist_;
    double dt_;
    std::size_t dim_;
    std::vector<double> y_; ///< stored states
    std::vector<double> f_; ///< derivative at each stored state (first RK stage)
};

} // namespace detail

/// Integrate the delayed network from `history` over [0, t_end].
///
/// The step is shrunk so t_end is a grid point. It may not exceed the
/// smallest positive delay, so every delayed lookup falls inside the stored
/// solution or the history.
inline Trajectory integrate(const NetworkSpec &spec, const History &history, double t_end,
                            const IntegrateOptions &opt = {}) {
    validate(spec);
    if (!(t_end > 0.0)) throw DomainError("integrate: t_end must be > 0");
    const std::size_t dim = 2 * spec.size();
    if (history.width() != dim) throw DomainError("integrate: history must have 2N components");

    double max_delay = 0.0;
    double min_delay = std::numeric_limits<double>::infinity();
    for (const auto &g : spec.genes) {
        for (double d : {g.tau_r, g.tau_p}) {
            max_delay = std::max(max_delay, d);
            if (d > 0.0) min_delay = std::min(min_delay, d);
        }
    }
    if (!history.is_constant() && (history.start() > -max_delay || history.end() < 0.0)) {
        throw DomainError("integrate: history span does not cover [-max delay, 0]");
    }

    double dt = opt.dt.value_or(default_step(spec, t_end));
    if (!(dt > 0.0)) throw DomainError("integrate: dt must be > 0");
    if (dt > min_delay * (1.0 + 1e-12)) throw DomainError("integrate: dt must not exceed the smallest positive delay");
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    dt = t_end / static_cast<double>(n_steps);

    detail::DdeStepper stepper(spec, history, dt, n_steps);
    stepper.run(n_steps);

    Trajectory traj;
    traj.N = spec.size();
    traj.dt = dt;
    traj.state = stepper.take_states();
    traj.t.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) traj.t[k] = static_cast<double>(k) * dt;
    traj.timescale = slowest_timescale(spec);
    if (opt.classify) traj.classification = classify(traj, opt.classify_options);
    return traj;
}

} // namespace cyclosc
