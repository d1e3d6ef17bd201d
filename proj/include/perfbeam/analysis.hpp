#pragma once

#include "errors.hpp"
#include "galerkin.hpp"
#include "perforation.hpp"
#include "profile.hpp"
#include "reference_tables.hpp"
#include "static_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <exception>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace perfbeam {

struct RatioReport {
    std::vector<double> x;
    std::vector<double> ratios; ///< dynamic / static at each retained sample
    double mean_ratio = 0.0;
    double relative_spread = 0.0; ///< (max - min) / mean
    double tolerance = 0.0;
    bool constant = false;
};

/// Closed interval of X over which ratios are taken.
struct SampleWindow {
    double lo = 0.0;
    double hi = 1.0;
};

/// Samples with |static| below this fraction of max |static| are skipped.
inline constexpr double ratio_floor = 1e-6;

/// Pointwise dynamic/static ratio and a constancy verdict.
[[nodiscard]] inline RatioReport ratio_profile(DeflectionProfile const& stat, DeflectionProfile const& dyn,
                                               double tolerance, SampleWindow window = {}) {
    if (stat.x.size() != dyn.x.size() || stat.values.size() != stat.x.size() ||
        dyn.values.size() != dyn.x.size()) {
        throw DomainError("static and dynamic profiles have different lengths");
    }
    for (std::size_t i = 0; i < stat.x.size(); ++i) {
        if (stat.x[i] != dyn.x[i]) {
            throw DomainError("static and dynamic profiles are sampled on different grids");
        }
    }
    double max_static = 0.0;
    for (double v : stat.values) {
        max_static = std::max(max_static, std::abs(v));
    }

    RatioReport rep;
    rep.tolerance = tolerance;
    for (std::size_t i = 0; i < stat.x.size(); ++i) {
        double const x = stat.x[i];
        if (x < window.lo || x > window.hi || std::abs(stat.values[i]) < ratio_floor * max_static) {
            continue;
        }
        rep.x.push_back(x);
        rep.ratios.push_back(dyn.values[i] / stat.values[i]);
    }
    if (rep.ratios.empty()) {
        throw DomainError("no samples above the static deflection floor");
    }
    double sum = 0.0;
    for (double r : rep.ratios) {
        sum += r;
    }
    rep.mean_ratio = sum / static_cast<double>(rep.ratios.size());
    auto const [mn, mx] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
    rep.relative_spread = (*mx - *mn) / std::abs(rep.mean_ratio);
    rep.constant = rep.relative_spread <= tolerance;
    return rep;
}

/// Solver settings shared by sweeps, table validation and the CLI.
struct SolverSettings {
    std::size_t chebyshev_order = 14;
    std::size_t collocation_count = 100;
    CollocationGrid grid = CollocationGrid::equispaced;
    StaticSolveOptions static_options{};
    GalerkinBasis galerkin{};
    InertiaModel inertia = InertiaModel::scalar_factor;
    std::size_t ratio_samples = 101;
    double ratio_tolerance = 1e-5;
    SampleWindow ratio_window{0.05, 0.95};
    double slenderness = 0.1; ///< used for the reference cases, which do not state it
};

/// Static and dynamic results of one case on a shared sample grid.
struct CaseResult {
    BeamCase beam;
    StaticSolution static_solution;
    DeflectionProfile static_profile;
    ModeResult mode;
    DeflectionProfile dynamic_profile;
    RatioReport ratio;
};

[[nodiscard]] inline CaseResult solve_case(BeamCase const& beam, SolverSettings const& s,
                                           std::vector<double> const& samples) {
    CaseResult r;
    r.beam = beam;
    StaticProblem const problem(beam, s.chebyshev_order, s.collocation_count, s.grid);
    r.static_solution = solve(problem, s.static_options);
    r.static_profile = static_deflection(problem, r.static_solution.weights, samples);
    r.mode = solve_fundamental(assemble(beam, s.galerkin, s.inertia), s.galerkin);
    r.dynamic_profile = dynamic_deflection(r.mode, samples);
    r.ratio = ratio_profile(r.static_profile, r.dynamic_profile, s.ratio_tolerance, s.ratio_window);
    return r;
}

inline std::vector<double> const default_probes{0.1, 0.3, 0.5, 0.6, 0.8, 0.9};

struct SweepRecord {
    BeamCase beam;
    std::vector<double> probes;
    std::vector<double> static_values;
    std::vector<double> dynamic_values;
    double lambda = 0.0;
    double mean_ratio = 0.0;
    double relative_spread = 0.0;
    std::optional<std::string> error; ///< set when this case failed
};

/// Runs every case on its own task; output order matches input order.
[[nodiscard]] inline std::vector<SweepRecord> sweep(std::vector<BeamCase> const& cases,
                                                    std::vector<double> const& probes = default_probes,
                                                    SolverSettings const& settings = {}) {
    auto run_one = [&](BeamCase const& beam) {
        SweepRecord rec;
        rec.beam = beam;
        rec.probes = probes;
        try {
            auto samples = uniform_samples(settings.ratio_samples);
            auto const result = solve_case(beam, settings, samples);
            StaticProblem const problem(beam, settings.chebyshev_order, settings.collocation_count, settings.grid);
            auto const sp = static_deflection(problem, result.static_solution.weights, probes);
            auto const dp = dynamic_deflection(result.mode, probes);
            rec.static_values = sp.values;
            rec.dynamic_values = dp.values;
            rec.lambda = result.mode.lambda;
            rec.mean_ratio = result.ratio.mean_ratio;
            rec.relative_spread = result.ratio.relative_spread;
        } catch (std::exception const& e) {
            rec.error = e.what();
        }
        return rec;
    };

    std::vector<SweepRecord> out(cases.size());
    std::size_t const workers = std::max<std::size_t>(1, std::min<std::size_t>(cases.size(),
                                                                                 std::thread::hardware_concurrency()));
    std::vector<std::future<void>> tasks;
    tasks.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        tasks.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < cases.size(); i += workers) {
                out[i] = run_one(cases[i]);
            }
        }));
    }
    for (auto& t : tasks) {
        t.get();
    }
    return out;
}

struct ValidationEntry {
    std::string group; ///< "static", "dynamic-shape", "convergence" or "ratio-constant"
    std::string label;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool asserted = true; ///< false for reference-only entries
    bool pass = true;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    [[nodiscard]] bool all_pass() const {
        return std::all_of(entries.begin(), entries.end(), [](auto const& e) { return !e.asserted || e.pass; });
    }
    [[nodiscard]] std::size_t asserted_count() const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](auto const& e) { return e.asserted; }));
    }
};

inline constexpr double table_tolerance = 1e-4;

namespace detail {

inline std::string case_label(BeamCase const& b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "alpha=%g N=%d nonlocal=%g", b.alpha, b.n_holes, b.nonlocal);
    return buf;
}

inline std::string probe_label(BeamCase const& b, double x) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s X=%g", case_label(b).c_str(), x);
    return buf;
}

} // namespace detail

/// Reproduces the reference static columns, the normalization-free dynamic
/// shape ratios and the basis-size stability of the dynamic solution.
/// Absolute ratio constants are listed for reference only.
[[nodiscard]] inline ValidationReport validate_tables(SolverSettings const& settings = {}) {
    ValidationReport rep;

    auto check_row = [&](reference::TableRow const& row) {
        BeamCase const beam{row.alpha, row.n_holes, row.nonlocal, settings.slenderness};
        std::vector<double> const probes(row.probes.begin(), row.probes.end());
        StaticProblem const problem(beam, settings.chebyshev_order, settings.collocation_count, settings.grid);
        auto const sol = solve(problem, settings.static_options);
        auto const sp = static_deflection(problem, sol.weights, probes);
        auto const mode = solve_fundamental(assemble(beam, settings.galerkin, settings.inertia), settings.galerkin);
        auto const dp = dynamic_deflection(mode, probes);

        for (std::size_t i = 0; i < probes.size(); ++i) {
            ValidationEntry e{"static", detail::probe_label(beam, probes[i]), row.static_values[i], sp.values[i],
                              table_tolerance};
            e.pass = std::abs(e.actual - e.expected) <= e.tolerance;
            rep.entries.push_back(e);
        }
        auto const anchor = static_cast<std::size_t>(row.anchor);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (i == anchor) {
                continue;
            }
            char label[192];
            std::snprintf(label, sizeof label, "%s W_d(%g)/W_d(%g)", detail::case_label(beam).c_str(), probes[i],
                          probes[anchor]);
            ValidationEntry e{"dynamic-shape", label, row.dynamic_values[i] / row.dynamic_values[anchor],
                              dp.values[i] / dp.values[anchor], table_tolerance};
            e.pass = std::abs(e.actual - e.expected) <= e.tolerance;
            rep.entries.push_back(e);
        }
        auto const samples = uniform_samples(settings.ratio_samples);
        auto const ratio = ratio_profile(static_deflection(problem, sol.weights, samples),
                                         dynamic_deflection(mode, samples), settings.ratio_tolerance,
                                         settings.ratio_window);
        ValidationEntry e{"ratio-constant", detail::case_label(beam), row.ratio_constant, ratio.mean_ratio, 0.0};
        e.asserted = false;
        e.pass = ratio.constant;
        rep.entries.push_back(e);
    };

    for (auto const& row : reference::filling_ratio_table) {
        check_row(row);
    }
    for (auto const& row : reference::nonlocal_table) {
        check_row(row);
    }

    // basis-size stability for n >= 10 under the unit-max normalization
    BeamCase const conv{0.5, 2, 0.2, settings.slenderness};
    std::vector<double> const probes(reference::convergence_probes.begin(), reference::convergence_probes.end());
    std::vector<std::vector<double>> values;
    for (std::size_t n = 10; n <= 15; ++n) {
        GalerkinBasis basis = settings.galerkin;
        basis.size = n;
        values.push_back(dynamic_deflection(solve_fundamental(assemble(conv, basis, settings.inertia), basis), probes).values);
    }
    for (std::size_t p = 0; p < probes.size(); ++p) {
        double mn = values.front()[p];
        double mx = mn;
        for (auto const& v : values) {
            mn = std::min(mn, v[p]);
            mx = std::max(mx, v[p]);
        }
        char label[160];
        std::snprintf(label, sizeof label, "%s X=%g spread over n=10..15", detail::case_label(conv).c_str(), probes[p]);
        ValidationEntry e{"convergence", label, 0.0, mx - mn, table_tolerance};
        e.pass = e.actual <= e.tolerance;
        rep.entries.push_back(e);
    }
    return rep;
}

} // namespace perfbeam
