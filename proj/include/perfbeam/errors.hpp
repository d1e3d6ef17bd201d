#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace perfbeam {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Elimination hit a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
  public:
    SingularMatrixError(std::string const& what, std::size_t pivot)
        : std::runtime_error(what), pivot_{pivot} {}

    [[nodiscard]] std::size_t pivot() const noexcept { return pivot_; }

  private:
    std::size_t pivot_;
};

/// Least-squares design matrix without full column rank.
class RankDeficientError : public std::runtime_error {
  public:
    RankDeficientError(std::string const& what, std::size_t column)
        : std::runtime_error(what), column_{column} {}

    [[nodiscard]] std::size_t column() const noexcept { return column_; }

  private:
    std::size_t column_;
};

/// Cholesky factorization failed; `minor()` is the 1-based leading minor.
class NotPositiveDefiniteError : public std::runtime_error {
  public:
    NotPositiveDefiniteError(std::string const& what, std::size_t minor)
        : std::runtime_error(what), minor_{minor} {}

    [[nodiscard]] std::size_t minor() const noexcept { return minor_; }

  private:
    std::size_t minor_;
};

/// Non-finite objective or gradient; carries the point where it happened.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(std::string const& what, std::vector<double> point)
        : std::runtime_error(what), point_{std::move(point)} {}

    [[nodiscard]] std::vector<double> const& point() const noexcept { return point_; }

  private:
    std::vector<double> point_;
};

/// Invalid switching-function construction (duplicate or dependent constraints).
class ConstraintError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace perfbeam
