#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppcorr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (alpha <= 2, negative
/// threshold, mismatched dimensions, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The mixture enumeration would exceed the configured assignment cap.
class EnumerationLimit : public InvalidArgument {
public:
    EnumerationLimit(std::size_t n, std::size_t cap)
        : InvalidArgument("mixture enumeration over N=" + std::to_string(n) +
                          " points exceeds the cap N<=" + std::to_string(cap)),
          n_(n),
          cap_(cap) {}

    std::size_t n() const noexcept { return n_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t n_;
    std::size_t cap_;
};

/// A requested correlation structure cannot be represented by a framework.
class InfeasibleModel : public Error {
public:
    using Error::Error;
};

/// Forward substitution produced a negative weight or hit a zero pivot.
class InfeasibleWeights : public InfeasibleModel {
public:
    InfeasibleWeights(const std::string& what, std::size_t row, std::size_t col, double value)
        : InfeasibleModel(what), row_(row), col_(col), value_(value) {}

    /// Zero-based position of the offending entry.
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }
    double value() const noexcept { return value_; }

private:
    std::size_t row_;
    std::size_t col_;
    double value_;
};

/// A private component intensity of the combination framework is negative.
class InfeasibleSplit : public InfeasibleModel {
public:
    InfeasibleSplit(const std::string& what, std::size_t row, double margin)
        : InfeasibleModel(what), row_(row), margin_(margin) {}

    std::size_t row() const noexcept { return row_; }
    double margin() const noexcept { return margin_; }

private:
    std::size_t row_;
    double margin_;
};

enum class ConvergenceFailure {
    kBudgetExhausted,   ///< max_evals reached before the tolerance was met
    kTailTruncation,    ///< no admissible cutoff radius certifies the tail
    kNonFinite,         ///< the integrand produced inf or NaN
};

/// Quadrature did not reach the requested tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, ConvergenceFailure kind, double value, double err_est)
        : Error(what), kind_(kind), value_(value), err_est_(err_est) {}

    ConvergenceFailure kind() const noexcept { return kind_; }
    /// Best value reached before giving up.
    double value() const noexcept { return value_; }
    double err_est() const noexcept { return err_est_; }

private:
    ConvergenceFailure kind_;
    double value_;
    double err_est_;
};

/// Sample statistics are undefined (zero variance, empty sample).
class DegenerateSample : public Error {
public:
    using Error::Error;
};

}  // namespace ppcorr
