#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace perfbeam {

struct LbfgsConfig {
    std::size_t memory = 10;
    std::size_t stages = 5;
    std::size_t max_iterations = 50; ///< per stage
    double gradient_tolerance = 1e-12; ///< on the max-norm of the gradient
    double sufficient_decrease = 1e-4;
    double curvature = 0.9;
    std::size_t max_line_search_evaluations = 40;
    /// Diagonal of the initial inverse-Hessian guess; empty means identity.
    std::vector<double> initial_inverse_hessian;

    void validate() const {
        if (memory == 0 || stages == 0 || max_iterations == 0 || max_line_search_evaluations == 0) {
            throw DomainError("L-BFGS counts must be positive");
        }
        if (!(sufficient_decrease > 0.0 && sufficient_decrease < curvature && curvature < 1.0)) {
            throw DomainError("line search needs 0 < sufficient_decrease < curvature < 1");
        }
        if (!(gradient_tolerance >= 0.0)) {
            throw DomainError("gradient tolerance must be >= 0");
        }
        for (double d : initial_inverse_hessian) {
            if (!(d > 0.0) || !std::isfinite(d)) {
                throw DomainError("initial inverse Hessian diagonal must be positive and finite");
            }
        }
    }
};

enum class Termination { converged, stage_budget_exhausted, line_search_failure };

[[nodiscard]] inline char const* to_string(Termination t) noexcept {
    switch (t) {
    case Termination::converged: return "converged";
    case Termination::stage_budget_exhausted: return "stage-budget-exhausted";
    case Termination::line_search_failure: return "line-search-failure";
    }
    return "unknown";
}

struct StageSummary {
    double objective = 0.0; ///< best objective at the end of the stage
    std::size_t iterations = 0;
    Termination termination = Termination::stage_budget_exhausted;
};

struct OptimReport {
    std::vector<double> point;
    double objective = 0.0;
    std::vector<StageSummary> stages;
    std::vector<double> trace; ///< objective after every accepted step, starting with the initial value
    std::size_t total_iterations = 0;
    Termination termination = Termination::stage_budget_exhausted;
};

namespace detail {

[[nodiscard]] inline double dot(std::span<double const> a, std::span<double const> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

[[nodiscard]] inline bool all_finite(std::span<double const> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), or the
/// midpoint if the cubic has no usable minimizer.
[[nodiscard]] inline double cubic_minimizer(double a, double fa, double da, double b, double fb, double db) {
    double const d1 = da + db - 3.0 * (fa - fb) / (a - b);
    double const disc = d1 * d1 - da * db;
    if (disc < 0.0) {
        return 0.5 * (a + b);
    }
    double const d2 = std::copysign(std::sqrt(disc), b - a);
    double const denom = db - da + 2.0 * d2;
    if (denom == 0.0) {
        return 0.5 * (a + b);
    }
    double const t = b - (b - a) * (db + d2 - d1) / denom;
    return std::isfinite(t) ? t : 0.5 * (a + b);
}

struct LineSearchResult {
    bool ok = false;
    double step = 0.0;
    double value = 0.0;
    std::vector<double> point;
    std::vector<double> gradient;
};

/// Bracketing and zoom phases of the strong-Wolfe search, with safeguarded
/// cubic interpolation inside the bracket.
template <class Objective, class Gradient>
LineSearchResult strong_wolfe(Objective& objective, Gradient& gradient, std::span<double const> x, double f0,
                              std::span<double const> g0, std::span<double const> dir, double initial_step,
                              LbfgsConfig const& cfg) {
    double const dphi0 = dot(g0, dir);
    LineSearchResult out;
    if (!(dphi0 < 0.0)) {
        return out;
    }

    std::size_t evaluations = 0;
    std::vector<double> trial(x.size());
    auto sample = [&](double step) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            trial[i] = x[i] + step * dir[i];
        }
        LineSearchResult r;
        r.step = step;
        r.point = trial;
        r.value = objective(std::span<double const>(trial));
        r.gradient = gradient(std::span<double const>(trial));
        ++evaluations;
        if (!std::isfinite(r.value) || !all_finite(r.gradient)) {
            throw NumericalError("non-finite objective or gradient during line search", trial);
        }
        return r;
    };
    auto armijo = [&](LineSearchResult const& r) { return r.value <= f0 + cfg.sufficient_decrease * r.step * dphi0; };
    auto slope = [&](LineSearchResult const& r) { return dot(r.gradient, dir); };

    auto zoom = [&](LineSearchResult lo, LineSearchResult hi) -> LineSearchResult {
        while (evaluations < cfg.max_line_search_evaluations) {
            double const a = lo.step;
            double const b = hi.step;
            double const width = std::abs(b - a);
            if (width <= 1e-16 * std::max(std::abs(a), std::abs(b))) {
                break;
            }
            double t = cubic_minimizer(a, lo.value, slope(lo), b, hi.value, slope(hi));
            double const lo_end = std::min(a, b) + 0.1 * width;
            double const hi_end = std::max(a, b) - 0.1 * width;
            t = std::clamp(t, lo_end, hi_end);
            auto r = sample(t);
            if (!armijo(r) || r.value >= lo.value) {
                hi = std::move(r);
                continue;
            }
            double const d = slope(r);
            if (std::abs(d) <= -cfg.curvature * dphi0) {
                r.ok = true;
                return r;
            }
            if (d * (hi.step - lo.step) >= 0.0) {
                hi = std::move(lo);
            }
            lo = std::move(r);
        }
        return {};
    };

    LineSearchResult prev;
    prev.step = 0.0;
    prev.value = f0;
    prev.gradient.assign(g0.begin(), g0.end());
    prev.point.assign(x.begin(), x.end());

    double step = initial_step;
    for (std::size_t i = 0; evaluations < cfg.max_line_search_evaluations; ++i) {
        auto r = sample(step);
        if (!armijo(r) || (i > 0 && r.value >= prev.value)) {
            return zoom(std::move(prev), std::move(r));
        }
        double const d = slope(r);
        if (std::abs(d) <= -cfg.curvature * dphi0) {
            r.ok = true;
            return r;
        }
        if (d >= 0.0) {
            return zoom(std::move(r), std::move(prev));
        }
        prev = std::move(r);
        step *= 4.0;
    }
    return out;
}

} // namespace detail

/// Staged L-BFGS: `stages` runs, each warm-started from the previous iterate
/// with empty curvature memory and at most `max_iterations` steps.
///
/// `objective` maps a span of weights to a double, `gradient` to a vector of
/// the same length. A line-search failure ends the current stage only.
template <class Objective, class Gradient>
OptimReport minimize(Objective objective, Gradient gradient, std::vector<double> start, LbfgsConfig const& cfg) {
    cfg.validate();
    std::size_t const n = start.size();
    if (n == 0) {
        throw DomainError("cannot minimize over an empty point");
    }
    if (!cfg.initial_inverse_hessian.empty() && cfg.initial_inverse_hessian.size() != n) {
        throw DomainError("initial inverse Hessian diagonal has wrong length");
    }
    std::vector<double> diag = cfg.initial_inverse_hessian;
    if (diag.empty()) {
        diag.assign(n, 1.0);
    }

    std::vector<double> x = std::move(start);
    double f = objective(std::span<double const>(x));
    std::vector<double> g = gradient(std::span<double const>(x));
    if (!std::isfinite(f) || g.size() != n || !detail::all_finite(g)) {
        throw NumericalError("objective or gradient is not finite at the starting point", x);
    }

    OptimReport report;
    report.trace.push_back(f);

    auto grad_small = [&](std::span<double const> v) {
        double m = 0.0;
        for (double e : v) {
            m = std::max(m, std::abs(e));
        }
        return m <= cfg.gradient_tolerance;
    };

    struct Pair {
        std::vector<double> s;
        std::vector<double> y;
        double rho;
    };

    for (std::size_t stage = 0; stage < cfg.stages; ++stage) {
        std::deque<Pair> memory;
        StageSummary summary;
        summary.termination = Termination::stage_budget_exhausted;

        for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
            if (grad_small(g)) {
                summary.termination = Termination::converged;
                break;
            }

            // two-loop recursion for d = -H g
            std::vector<double> q = g;
            std::vector<double> alphas(memory.size());
            for (std::size_t k = memory.size(); k-- > 0;) {
                alphas[k] = memory[k].rho * detail::dot(memory[k].s, q);
                for (std::size_t i = 0; i < n; ++i) {
                    q[i] -= alphas[k] * memory[k].y[i];
                }
            }
            double gamma = 1.0;
            if (!memory.empty()) {
                auto const& last = memory.back();
                double ydy = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    ydy += last.y[i] * diag[i] * last.y[i];
                }
                gamma = detail::dot(last.s, last.y) / ydy;
            }
            for (std::size_t i = 0; i < n; ++i) {
                q[i] *= gamma * diag[i];
            }
            for (std::size_t k = 0; k < memory.size(); ++k) {
                double const beta = memory[k].rho * detail::dot(memory[k].y, q);
                for (std::size_t i = 0; i < n; ++i) {
                    q[i] += memory[k].s[i] * (alphas[k] - beta);
                }
            }
            for (double& e : q) {
                e = -e;
            }

            double initial_step = 1.0;
            if (memory.empty() && cfg.initial_inverse_hessian.empty()) {
                double const gn = std::sqrt(detail::dot(g, g));
                initial_step = std::min(1.0, 1.0 / gn);
            }

            auto ls = detail::strong_wolfe(objective, gradient, x, f, g, q, initial_step, cfg);
            if (!ls.ok) {
                summary.termination = Termination::line_search_failure;
                break;
            }

            Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                p.s[i] = ls.point[i] - x[i];
                p.y[i] = ls.gradient[i] - g[i];
            }
            double const sy = detail::dot(p.s, p.y);
            x = std::move(ls.point);
            f = ls.value;
            g = std::move(ls.gradient);
            report.trace.push_back(f);
            ++summary.iterations;

            if (sy > 0.0) {
                p.rho = 1.0 / sy;
                memory.push_back(std::move(p));
                if (memory.size() > cfg.memory) {
                    memory.pop_front();
                }
            }
        }
        if (summary.termination == Termination::stage_budget_exhausted && grad_small(g)) {
            summary.termination = Termination::converged;
        }
        summary.objective = f;
        report.total_iterations += summary.iterations;
        report.stages.push_back(summary);
        report.termination = summary.termination;
        if (summary.termination == Termination::converged) {
            break;
        }
    }

    report.point = std::move(x);
    report.objective = f;
    return report;
}

} // namespace perfbeam
