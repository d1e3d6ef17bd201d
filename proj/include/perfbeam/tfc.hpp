#pragma once

#include "chebyshev.hpp"
#include "errors.hpp"
#include "linalg.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perfbeam {

/// f^(derivative_order)(location) = value
struct PointConstraint {
    double location = 0.0;
    int derivative_order = 0;
    double value = 0.0;

    friend bool operator==(PointConstraint const&, PointConstraint const&) = default;
};

/// Zero deflection and zero bending moment at both ends of [0, 1].
[[nodiscard]] inline std::vector<PointConstraint> simply_supported_constraints() {
    return {{0.0, 0, 0.0}, {1.0, 0, 0.0}, {0.0, 2, 0.0}, {1.0, 2, 0.0}};
}

namespace detail {

/// d^d/dx^d x^p
template <class T = double>
[[nodiscard]] T monomial_derivative(std::size_t power, int d, T x) {
    if (static_cast<std::size_t>(d) > power) {
        return T{};
    }
    T factor{1};
    for (int i = 0; i < d; ++i) {
        factor *= static_cast<T>(power - static_cast<std::size_t>(i));
    }
    std::size_t const remaining = power - static_cast<std::size_t>(d);
    T xp{1};
    for (std::size_t i = 0; i < remaining; ++i) {
        xp *= x;
    }
    return factor * xp;
}

} // namespace detail

/// Switching functions psi_j(x) = sum_i coeff(i, j) x^i over monomial supports.
///
/// The coefficient matrix is the inverse of A_ij = C^i[x^j], so applying
/// constraint operator i to psi_j yields the Kronecker delta.
///
/// Coefficients are held in extended precision: sums such as
/// -1/3 + 1/2 - 1/6 must cancel to well below 1e-12 because they multiply
/// projections of order 1e5 (second derivatives of high-degree terms).
class SwitchingFunctionSet {
  public:
    using Scalar = long double;

    SwitchingFunctionSet() = default;
    explicit SwitchingFunctionSet(BasicDenseMatrix<Scalar> coefficients) : coefficients_{std::move(coefficients)} {}

    [[nodiscard]] std::size_t count() const noexcept { return coefficients_.cols(); }
    [[nodiscard]] BasicDenseMatrix<Scalar> const& coefficients() const noexcept { return coefficients_; }

    /// d-th derivative of psi_j at x.
    [[nodiscard]] Scalar eval_extended(std::size_t j, double x, int d) const {
        Scalar s{};
        for (std::size_t i = 0; i < coefficients_.rows(); ++i) {
            s += coefficients_(i, j) * detail::monomial_derivative<Scalar>(i, d, x);
        }
        return s;
    }

    [[nodiscard]] double eval(std::size_t j, double x, int d) const {
        return static_cast<double>(eval_extended(j, x, d));
    }

  private:
    BasicDenseMatrix<Scalar> coefficients_;
};

[[nodiscard]] inline SwitchingFunctionSet build_switching_functions(std::span<PointConstraint const> constraints) {
    std::size_t const k = constraints.size();
    if (k == 0) {
        throw ConstraintError("at least one constraint is required");
    }
    for (std::size_t i = 0; i < k; ++i) {
        auto const& c = constraints[i];
        if (!(c.location >= 0.0 && c.location <= 1.0)) {
            throw ConstraintError("constraint " + std::to_string(i) + " location outside [0, 1]");
        }
        if (c.derivative_order < 0 || c.derivative_order > MappedChebyshevBasis::max_derivative) {
            throw ConstraintError("constraint " + std::to_string(i) + " derivative order outside 0..4");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (constraints[j].location == c.location && constraints[j].derivative_order == c.derivative_order) {
                throw ConstraintError("constraints " + std::to_string(j) + " and " + std::to_string(i) +
                                      " act on the same (location, derivative order)");
            }
        }
    }

    BasicDenseMatrix<SwitchingFunctionSet::Scalar> a(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            a(i, j) = detail::monomial_derivative<SwitchingFunctionSet::Scalar>(j, constraints[i].derivative_order,
                                                                               constraints[i].location);
        }
    }
    try {
        return SwitchingFunctionSet{invert(a)};
    } catch (SingularMatrixError const& e) {
        throw ConstraintError("constraint operators are linearly dependent on the monomial supports (pivot " +
                              std::to_string(e.pivot()) + ")");
    }
}

/// f(x) = h(x) + sum_j psi_j(x) (k_j - C^j[h]) with h a Chebyshev expansion.
///
/// Every constraint holds for any weight vector; f is affine in the weights.
class ConstrainedExpression {
  public:
    ConstrainedExpression(MappedChebyshevBasis basis, std::vector<PointConstraint> constraints)
        : basis_{basis}, constraints_{std::move(constraints)}, switching_{build_switching_functions(constraints_)} {}

    [[nodiscard]] MappedChebyshevBasis const& basis() const noexcept { return basis_; }
    [[nodiscard]] std::vector<PointConstraint> const& constraints() const noexcept { return constraints_; }
    [[nodiscard]] SwitchingFunctionSet const& switching() const noexcept { return switching_; }
    [[nodiscard]] std::size_t weight_count() const noexcept { return basis_.size(); }

    /// rho_j = k_j - C^j[h], recomputed from the weights on every call.
    [[nodiscard]] std::vector<double> projections(std::span<double const> weights) const {
        check_weights(weights);
        std::vector<double> rho(constraints_.size());
        std::vector<double> phi(basis_.size());
        for (std::size_t j = 0; j < constraints_.size(); ++j) {
            auto const& c = constraints_[j];
            basis_.eval(c.location, c.derivative_order, phi);
            double h = 0.0;
            for (std::size_t m = 0; m < phi.size(); ++m) {
                h += weights[m] * phi[m];
            }
            rho[j] = c.value - h;
        }
        return rho;
    }

    [[nodiscard]] double evaluate(std::span<double const> weights, double x, int deriv_order) const {
        auto const rho = projections(weights);
        auto const phi = basis_.eval(x, deriv_order);
        double h = 0.0;
        for (std::size_t m = 0; m < phi.size(); ++m) {
            h += weights[m] * phi[m];
        }
        SwitchingFunctionSet::Scalar f = h;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            f += switching_.eval_extended(j, x, deriv_order) * rho[j];
        }
        return static_cast<double>(f);
    }

    /// Coefficients r and offset c with f^(d)(x) = r . w + c.
    struct AffineRow {
        std::vector<double> coefficients;
        double offset = 0.0;
    };

    [[nodiscard]] AffineRow affine_row(double x, int deriv_order) const {
        AffineRow row{basis_.eval(x, deriv_order), 0.0};
        std::vector<double> phi(basis_.size());
        for (std::size_t j = 0; j < constraints_.size(); ++j) {
            auto const& c = constraints_[j];
            double const psi = switching_.eval(j, x, deriv_order);
            if (psi == 0.0) {
                continue;
            }
            basis_.eval(c.location, c.derivative_order, phi);
            for (std::size_t m = 0; m < phi.size(); ++m) {
                row.coefficients[m] -= psi * phi[m];
            }
            row.offset += psi * c.value;
        }
        return row;
    }

  private:
    void check_weights(std::span<double const> weights) const {
        if (weights.size() != basis_.size()) {
            throw DomainError("weight vector length " + std::to_string(weights.size()) + " does not match basis size " +
                              std::to_string(basis_.size()));
        }
    }

    MappedChebyshevBasis basis_;
    std::vector<PointConstraint> constraints_;
    SwitchingFunctionSet switching_;
};

[[nodiscard]] inline double evaluate_ce(ConstrainedExpression const& ce, std::span<double const> weights, double x,
                                        int deriv_order) {
    return ce.evaluate(weights, x, deriv_order);
}

} // namespace perfbeam
