#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cyclosc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
  public:
    using Error::Error;
};

enum class ValidationKind {
    PositiveCycle,
    NonPositiveRate,
    NegativeDelay,
    BadHillCoefficient,
    BadHillScale,
    EmptyNetwork,
};

inline const char *to_string(ValidationKind k) {
    switch (k) {
    case ValidationKind::PositiveCycle: return "PositiveCycle";
    case ValidationKind::NonPositiveRate: return "NonPositiveRate";
    case ValidationKind::NegativeDelay: return "NegativeDelay";
    case ValidationKind::BadHillCoefficient: return "BadHillCoefficient";
    case ValidationKind::BadHillScale: return "BadHillScale";
    case ValidationKind::EmptyNetwork: return "EmptyNetwork";
    }
    return "Unknown";
}

/// A NetworkSpec invariant does not hold. `gene()` is the 0-based offending
/// gene when the failure is local to one gene.
class ValidationError : public Error {
  public:
    ValidationError(ValidationKind kind, std::optional<std::size_t> gene, const std::string &what)
        : Error(std::string(to_string(kind)) + (gene ? " (gene " + std::to_string(*gene + 1) + ")" : "") +
                ": " + what),
          kind_(kind), gene_(gene) {}

    [[nodiscard]] ValidationKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<std::size_t> gene() const noexcept { return gene_; }

  private:
    ValidationKind kind_;
    std::optional<std::size_t> gene_;
};

class UnknownPreset : public Error {
  public:
    explicit UnknownPreset(const std::string &name) : Error("unknown preset: " + name) {}
};

/// Degradation rates differ between genes; the homogeneous reduction does not apply.
class HeterogeneousSpec : public Error {
  public:
    using Error::Error;
};

/// An iterative method did not reach its tolerance within its budget.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Internal consistency violated (a bracket that must exist does not).
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

/// The gain never reaches L (L <= 1).
class NoCrossing : public Error {
  public:
    using Error::Error;
};

/// The requested quantity is undefined for these inputs (e.g. nu <= L_bar).
class NotApplicable : public Error {
  public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Integration produced a non-finite state.
class SimulationError : public Error {
  public:
    SimulationError(const std::string &what, double last_valid_time)
        : Error(what), last_valid_time_(last_valid_time) {}
    [[nodiscard]] double last_valid_time() const noexcept { return last_valid_time_; }

  private:
    double last_valid_time_;
};

} // namespace cyclosc
