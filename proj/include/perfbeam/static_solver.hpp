#pragma once

#include "chebyshev.hpp"
#include "errors.hpp"
#include "lbfgs.hpp"
#include "linalg.hpp"
#include "perforation.hpp"
#include "profile.hpp"
#include "tfc.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace perfbeam {

enum class CollocationGrid { equispaced, chebyshev };
enum class SolveMethod { lbfgs, direct };

[[nodiscard]] inline char const* to_string(SolveMethod m) noexcept {
    return m == SolveMethod::lbfgs ? "lbfgs" : "direct";
}

/// Right-hand side of W'''' = (1 + abar^2 pi^2) sin(pi X) / P1.
[[nodiscard]] inline double forcing(BeamCase const& beam, double x) {
    double const p1 = effective_coefficients(beam).p1;
    double const pi = std::numbers::pi;
    return (1.0 + beam.nonlocal * beam.nonlocal * pi * pi) * std::sin(pi * x) / p1;
}

[[nodiscard]] inline std::vector<double> collocation_points(std::size_t count, CollocationGrid grid) {
    if (count < 2) {
        throw DomainError("collocation count must be at least 2");
    }
    if (grid == CollocationGrid::equispaced) {
        return uniform_samples(count);
    }
    std::vector<double> x(count);
    double const denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        x[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / denom));
    }
    return x;
}

/// Simply supported bending problem discretized on a collocation grid.
///
/// The fourth derivative of the constrained expression is affine in the
/// weights, so the residual over the grid is `design * w + offset - rhs`.
class StaticProblem {
  public:
    explicit StaticProblem(BeamCase beam, std::size_t order = 14, std::size_t collocation_count = 100,
                           CollocationGrid grid = CollocationGrid::equispaced)
        : beam_{(beam.validate(), beam)}, ce_{MappedChebyshevBasis{order}, simply_supported_constraints()},
          points_{collocation_points(collocation_count, grid)}, grid_{grid} {
        if (collocation_count < ce_.weight_count()) {
            throw DomainError("collocation count " + std::to_string(collocation_count) +
                              " is smaller than the basis size " + std::to_string(ce_.weight_count()));
        }
        design_ = DenseMatrix(points_.size(), ce_.weight_count());
        offset_.resize(points_.size());
        rhs_.resize(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            auto row = ce_.affine_row(points_[i], 4);
            std::copy(row.coefficients.begin(), row.coefficients.end(), design_.row(i).begin());
            offset_[i] = row.offset;
            rhs_[i] = forcing(beam_, points_[i]);
        }
    }

    [[nodiscard]] BeamCase const& beam() const noexcept { return beam_; }
    [[nodiscard]] ConstrainedExpression const& expression() const noexcept { return ce_; }
    [[nodiscard]] std::vector<double> const& points() const noexcept { return points_; }
    [[nodiscard]] CollocationGrid grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t weight_count() const noexcept { return ce_.weight_count(); }
    [[nodiscard]] DenseMatrix const& design() const noexcept { return design_; }
    [[nodiscard]] std::vector<double> const& offset() const noexcept { return offset_; }
    [[nodiscard]] std::vector<double> const& rhs() const noexcept { return rhs_; }

    /// Residual at every collocation point.
    [[nodiscard]] std::vector<double> residuals(std::span<double const> weights) const {
        auto r = multiply(design_, weights);
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] += offset_[i] - rhs_[i];
        }
        return r;
    }

  private:
    BeamCase beam_;
    ConstrainedExpression ce_;
    std::vector<double> points_;
    CollocationGrid grid_;
    DenseMatrix design_;
    std::vector<double> offset_;
    std::vector<double> rhs_;
};

/// R(x) = d^4/dX^4 of the constrained expression minus the load term.
[[nodiscard]] inline double residual(StaticProblem const& problem, std::span<double const> weights, double x) {
    return evaluate_ce(problem.expression(), weights, x, 4) - forcing(problem.beam(), x);
}

/// Mean-square residual over the collocation grid.
[[nodiscard]] inline double loss(StaticProblem const& problem, std::span<double const> weights) {
    auto const r = problem.residuals(weights);
    double s = 0.0;
    for (double e : r) {
        s += e * e;
    }
    return s / static_cast<double>(r.size());
}

/// (2 / n) A^T r
[[nodiscard]] inline std::vector<double> loss_gradient(StaticProblem const& problem, std::span<double const> weights) {
    auto const r = problem.residuals(weights);
    auto g = multiply_transposed(problem.design(), r);
    double const scale = 2.0 / static_cast<double>(r.size());
    for (double& e : g) {
        e *= scale;
    }
    return g;
}

/// Diagonal of the (constant) loss Hessian, (2 / n) sum_i A_ij^2.
[[nodiscard]] inline std::vector<double> loss_hessian_diagonal(StaticProblem const& problem) {
    auto const& a = problem.design();
    std::vector<double> d(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            d[j] += a(i, j) * a(i, j);
        }
    }
    for (double& e : d) {
        e *= 2.0 / static_cast<double>(a.rows());
    }
    return d;
}

/// Uniform [-0.1, 0.1] weights from a 64-bit Mersenne twister.
///
/// The unit deviate is built from the top 53 bits by hand because
/// std::uniform_real_distribution is not reproducible across standard libraries.
[[nodiscard]] inline std::vector<double> initial_weights(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng{seed};
    std::vector<double> w(count);
    for (double& e : w) {
        double const u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        e = -0.1 + 0.2 * u;
    }
    return w;
}

/// Five restarted stages of at most 50 iterations, Jacobi-scaled initial
/// inverse Hessian, memory covering the whole weight vector.
[[nodiscard]] inline LbfgsConfig training_config(StaticProblem const& problem) {
    LbfgsConfig cfg;
    cfg.stages = 5;
    cfg.max_iterations = 50;
    cfg.memory = problem.weight_count() + 5;
    auto const d = loss_hessian_diagonal(problem);
    cfg.initial_inverse_hessian.resize(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
        cfg.initial_inverse_hessian[j] = d[j] > 0.0 ? 1.0 / d[j] : 1.0;
    }
    return cfg;
}

struct TrainReport {
    SolveMethod method = SolveMethod::direct;
    std::optional<OptimReport> optim; ///< only for the L-BFGS path
    double mean_square_residual = 0.0;
};

struct StaticSolution {
    std::vector<double> weights;
    TrainReport report;
};

struct StaticSolveOptions {
    SolveMethod method = SolveMethod::direct;
    std::uint64_t seed = 0;
    std::optional<LbfgsConfig> lbfgs; ///< defaults to training_config(problem)
};

/// Trains the free-function weights.
///
/// Weights of T_0..T_3 never reach the fourth derivative and are annihilated by
/// the constraints, so their design columns are identically zero. The direct
/// path drops those columns and leaves their weights at 0; the L-BFGS path sees
/// a zero gradient there and leaves them at their initial values.
[[nodiscard]] inline StaticSolution solve(StaticProblem const& problem, StaticSolveOptions const& options = {}) {
    StaticSolution sol;
    sol.report.method = options.method;

    if (options.method == SolveMethod::direct) {
        auto const& a = problem.design();
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            bool nonzero = false;
            for (std::size_t i = 0; i < a.rows() && !nonzero; ++i) {
                nonzero = a(i, j) != 0.0;
            }
            if (nonzero) {
                active.push_back(j);
            }
        }
        DenseMatrix reduced(a.rows(), active.size());
        std::vector<double> b(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t k = 0; k < active.size(); ++k) {
                reduced(i, k) = a(i, active[k]);
            }
            b[i] = problem.rhs()[i] - problem.offset()[i];
        }
        auto const w = least_squares(reduced, b);
        sol.weights.assign(a.cols(), 0.0);
        for (std::size_t k = 0; k < active.size(); ++k) {
            sol.weights[active[k]] = w[k];
        }
    } else {
        auto const cfg = options.lbfgs.value_or(training_config(problem));
        auto report = minimize([&](std::span<double const> w) { return loss(problem, w); },
                               [&](std::span<double const> w) { return loss_gradient(problem, w); },
                               initial_weights(problem.weight_count(), options.seed), cfg);
        sol.weights = report.point;
        sol.report.optim = std::move(report);
    }
    sol.report.mean_square_residual = loss(problem, sol.weights);
    return sol;
}

/// 100 x constrained expression at `samples`.
[[nodiscard]] inline DeflectionProfile static_deflection(StaticProblem const& problem, std::span<double const> weights,
                                                         std::span<double const> samples) {
    DeflectionProfile p;
    p.kind = ProfileKind::static_deflection;
    p.x.assign(samples.begin(), samples.end());
    p.values.reserve(samples.size());
    for (double x : samples) {
        p.values.push_back(presentation_scale * evaluate_ce(problem.expression(), weights, x, 0));
    }
    return p;
}

/// Exact solution (1 + abar^2 pi^2) / (P1 pi^4) sin(pi X), scaled by 100.
[[nodiscard]] inline DeflectionProfile closed_form_static(BeamCase const& beam, std::span<double const> samples) {
    double const pi = std::numbers::pi;
    double const p1 = effective_coefficients(beam).p1;
    double const amplitude = (1.0 + beam.nonlocal * beam.nonlocal * pi * pi) / (p1 * pi * pi * pi * pi);
    DeflectionProfile p;
    p.kind = ProfileKind::static_deflection;
    p.x.assign(samples.begin(), samples.end());
    p.values.reserve(samples.size());
    for (double x : samples) {
        p.values.push_back(presentation_scale * amplitude * std::sin(pi * x));
    }
    return p;
}

} // namespace perfbeam
