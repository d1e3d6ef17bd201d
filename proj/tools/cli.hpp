#pragma once

#include <perfbeam/perfbeam.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace perfbeam::cli {

enum class ExitCode : int { success = 0, validation_failed = 1, usage = 2, runtime = 3 };

enum class OutputFormat { csv, json };

/// Everything a single invocation needs. Case fields are lists so `sweep`
/// can take a grid; other commands accept exactly one value.
struct RunConfig {
    std::string command;
    std::vector<double> alpha{1.0};
    std::vector<int> n_holes{1};
    std::vector<double> nonlocal{0.0};
    double slenderness = 0.1;
    std::size_t order = 14;
    std::size_t points = 100;
    std::size_t galerkin_size = 14;
    SolveMethod method = SolveMethod::lbfgs;
    std::uint64_t seed = 0;
    std::size_t samples = 101;
    std::string output;
    std::optional<OutputFormat> format;
    CollocationGrid grid = CollocationGrid::equispaced;
    TrialFamily basis = TrialFamily::legendre_bubble;
    InertiaModel inertia = InertiaModel::scalar_factor;
    bool case_flags_given = false;

    [[nodiscard]] BeamCase single_case() const { return {alpha.front(), n_holes.front(), nonlocal.front(), slenderness}; }

    [[nodiscard]] SolverSettings settings() const {
        SolverSettings s;
        s.chebyshev_order = order;
        s.collocation_count = points;
        s.grid = grid;
        s.static_options.method = method;
        s.static_options.seed = seed;
        s.galerkin.size = galerkin_size;
        s.galerkin.family = basis;
        s.inertia = inertia;
        s.ratio_samples = samples;
        s.slenderness = slenderness;
        return s;
    }

    [[nodiscard]] OutputFormat effective_format() const {
        if (format) {
            return *format;
        }
        return command == "ratio" || command == "validate" ? OutputFormat::json : OutputFormat::csv;
    }
};

/// Raised for option combinations that individual validators cannot see.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// `%.10g`, the fixed precision of every emitted number.
[[nodiscard]] inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace detail {

inline CLI::Validator open_unit_interval() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            double v = 0.0;
            if (!CLI::detail::lexical_cast(s, v)) {
                return "value " + s + " is not a number";
            }
            return v > 0.0 && v <= 1.0 ? std::string{} : "value " + s + " is outside (0, 1]";
        },
        "(0,1]");
}

inline CLI::Validator positive() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            double v = 0.0;
            if (!CLI::detail::lexical_cast(s, v)) {
                return "value " + s + " is not a number";
            }
            return v > 0.0 ? std::string{} : "value " + s + " must be > 0";
        },
        "POSITIVE");
}

inline void write_csv(std::ostream& os, std::vector<std::string> const& header,
                      std::vector<std::vector<std::string>> const& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        os << (i ? "," : "") << header[i];
    }
    os << '\n';
    for (auto const& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            os << (i ? "," : "") << r[i];
        }
        os << '\n';
    }
}

inline nlohmann::ordered_json case_json(BeamCase const& b) {
    nlohmann::ordered_json j;
    j["alpha"] = b.alpha;
    j["n_holes"] = b.n_holes;
    j["nonlocal"] = b.nonlocal;
    j["slenderness"] = b.slenderness;
    return j;
}

inline void check_cross_constraints(RunConfig const& cfg) {
    if (cfg.command != "sweep") {
        if (cfg.alpha.size() != 1) {
            throw UsageError("--alpha: takes a single value except for sweep");
        }
        if (cfg.n_holes.size() != 1) {
            throw UsageError("--n-holes: takes a single value except for sweep");
        }
        if (cfg.nonlocal.size() != 1) {
            throw UsageError("--nonlocal: takes a single value except for sweep");
        }
    }
    if (cfg.points < cfg.order + 1) {
        throw UsageError("--points: must be at least --order + 1 (" + std::to_string(cfg.order + 1) + ")");
    }
    bool const needs_dynamic = cfg.command != "static";
    if (needs_dynamic && cfg.inertia == InertiaModel::scalar_factor && cfg.command != "validate") {
        for (double ab : cfg.nonlocal) {
            if (ab >= 1.0) {
                throw UsageError("--nonlocal: must be < 1 with --inertia scalar, got " + format_number(ab));
            }
        }
    }
}

inline std::vector<BeamCase> sweep_cases(RunConfig const& cfg) {
    std::vector<BeamCase> cases;
    if (!cfg.case_flags_given) {
        for (auto const& row : reference::filling_ratio_table) {
            cases.push_back({row.alpha, row.n_holes, row.nonlocal, cfg.slenderness});
        }
        for (auto const& row : reference::nonlocal_table) {
            cases.push_back({row.alpha, row.n_holes, row.nonlocal, cfg.slenderness});
        }
        return cases;
    }
    for (double a : cfg.alpha) {
        for (int n : cfg.n_holes) {
            for (double ab : cfg.nonlocal) {
                cases.push_back({a, n, ab, cfg.slenderness});
            }
        }
    }
    return cases;
}

inline ExitCode emit_static(RunConfig const& cfg, std::ostream& os) {
    auto const beam = cfg.single_case();
    StaticProblem const problem(beam, cfg.order, cfg.points, cfg.grid);
    StaticSolveOptions opts;
    opts.method = cfg.method;
    opts.seed = cfg.seed;
    auto const sol = solve(problem, opts);
    auto const p = static_deflection(problem, sol.weights, uniform_samples(cfg.samples));
    if (cfg.effective_format() == OutputFormat::csv) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < p.size(); ++i) {
            rows.push_back({format_number(p.x[i]), format_number(p.values[i])});
        }
        write_csv(os, {"X", "W_static"}, rows);
    } else {
        nlohmann::ordered_json j;
        j["command"] = "static";
        j["case"] = case_json(beam);
        j["method"] = to_string(cfg.method);
        j["mean_square_residual"] = sol.report.mean_square_residual;
        j["X"] = p.x;
        j["W_static"] = p.values;
        os << j.dump(2) << '\n';
    }
    return ExitCode::success;
}

inline ExitCode emit_dynamic(RunConfig const& cfg, std::ostream& os) {
    auto const beam = cfg.single_case();
    auto const s = cfg.settings();
    auto const mode = solve_fundamental(assemble(beam, s.galerkin, s.inertia), s.galerkin);
    auto const p = dynamic_deflection(mode, uniform_samples(cfg.samples));
    if (cfg.effective_format() == OutputFormat::csv) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < p.size(); ++i) {
            rows.push_back({format_number(p.x[i]), format_number(p.values[i]), format_number(mode.lambda)});
        }
        write_csv(os, {"X", "W_dynamic", "lambda"}, rows);
    } else {
        nlohmann::ordered_json j;
        j["command"] = "dynamic";
        j["case"] = case_json(beam);
        j["lambda"] = mode.lambda;
        j["X"] = p.x;
        j["W_dynamic"] = p.values;
        os << j.dump(2) << '\n';
    }
    return ExitCode::success;
}

inline ExitCode emit_ratio(RunConfig const& cfg, std::ostream& os) {
    auto const beam = cfg.single_case();
    auto const r = solve_case(beam, cfg.settings(), uniform_samples(cfg.samples));
    if (cfg.effective_format() == OutputFormat::csv) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < r.ratio.x.size(); ++i) {
            rows.push_back({format_number(r.ratio.x[i]), format_number(r.ratio.ratios[i])});
        }
        write_csv(os, {"X", "ratio"}, rows);
    } else {
        nlohmann::ordered_json j;
        j["mean_ratio"] = r.ratio.mean_ratio;
        j["relative_spread"] = r.ratio.relative_spread;
        j["constant"] = r.ratio.constant;
        j["tolerance"] = r.ratio.tolerance;
        j["case"] = case_json(beam);
        j["lambda"] = r.mode.lambda;
        os << j.dump(2) << '\n';
    }
    return ExitCode::success;
}

inline ExitCode emit_sweep(RunConfig const& cfg, std::ostream& os) {
    auto const recs = sweep(sweep_cases(cfg), default_probes, cfg.settings());
    if (cfg.effective_format() == OutputFormat::csv) {
        std::vector<std::string> header{"alpha", "n_holes", "nonlocal", "slenderness", "lambda", "mean_ratio",
                                        "relative_spread"};
        for (double x : default_probes) {
            header.push_back("W_static@" + format_number(x));
        }
        for (double x : default_probes) {
            header.push_back("W_dynamic@" + format_number(x));
        }
        header.push_back("error");
        std::vector<std::vector<std::string>> rows;
        for (auto const& r : recs) {
            std::vector<std::string> row{format_number(r.beam.alpha), std::to_string(r.beam.n_holes),
                                         format_number(r.beam.nonlocal), format_number(r.beam.slenderness)};
            if (r.error) {
                row.resize(header.size() - 1);
                std::string msg = *r.error;
                for (char& c : msg) {
                    c = c == ',' ? ';' : c;
                }
                row.push_back(msg);
            } else {
                row.push_back(format_number(r.lambda));
                row.push_back(format_number(r.mean_ratio));
                row.push_back(format_number(r.relative_spread));
                for (double v : r.static_values) {
                    row.push_back(format_number(v));
                }
                for (double v : r.dynamic_values) {
                    row.push_back(format_number(v));
                }
                row.emplace_back();
            }
            rows.push_back(std::move(row));
        }
        write_csv(os, header, rows);
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (auto const& r : recs) {
            nlohmann::ordered_json j;
            j["case"] = case_json(r.beam);
            if (r.error) {
                j["error"] = *r.error;
            } else {
                j["probes"] = r.probes;
                j["W_static"] = r.static_values;
                j["W_dynamic"] = r.dynamic_values;
                j["lambda"] = r.lambda;
                j["mean_ratio"] = r.mean_ratio;
                j["relative_spread"] = r.relative_spread;
            }
            arr.push_back(std::move(j));
        }
        os << arr.dump(2) << '\n';
    }
    bool const any_error = std::any_of(recs.begin(), recs.end(), [](auto const& r) { return r.error.has_value(); });
    return any_error ? ExitCode::runtime : ExitCode::success;
}

inline ExitCode emit_validate(RunConfig const& cfg, std::ostream& os) {
    auto const rep = validate_tables(cfg.settings());
    if (cfg.effective_format() == OutputFormat::csv) {
        std::vector<std::vector<std::string>> rows;
        for (auto const& e : rep.entries) {
            rows.push_back({e.group, e.label, format_number(e.expected), format_number(e.actual),
                            format_number(e.tolerance), e.asserted ? "yes" : "no", e.pass ? "pass" : "fail"});
        }
        write_csv(os, {"group", "label", "expected", "actual", "tolerance", "asserted", "pass"}, rows);
    } else {
        nlohmann::ordered_json j;
        j["all_pass"] = rep.all_pass();
        j["asserted"] = rep.asserted_count();
        j["entries"] = nlohmann::ordered_json::array();
        for (auto const& e : rep.entries) {
            nlohmann::ordered_json x;
            x["group"] = e.group;
            x["label"] = e.label;
            x["expected"] = e.expected;
            x["actual"] = e.actual;
            x["tolerance"] = e.tolerance;
            x["asserted"] = e.asserted;
            x["pass"] = e.pass;
            j["entries"].push_back(std::move(x));
        }
        os << j.dump(2) << '\n';
    }
    return rep.all_pass() ? ExitCode::success : ExitCode::validation_failed;
}

} // namespace detail

/// Parses `args` (without the program name) into `cfg`.
/// Throws CLI::ParseError or UsageError.
inline void parse(std::vector<std::string> args, RunConfig& cfg, CLI::App& app) {
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::map<std::string, SolveMethod> const methods{{"lbfgs", SolveMethod::lbfgs}, {"direct", SolveMethod::direct}};
    std::map<std::string, OutputFormat> const formats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    std::map<std::string, CollocationGrid> const grids{{"equispaced", CollocationGrid::equispaced},
                                                       {"chebyshev", CollocationGrid::chebyshev}};
    std::map<std::string, TrialFamily> const bases{{"legendre", TrialFamily::legendre_bubble},
                                                   {"monomial", TrialFamily::monomial_bubble},
                                                   {"sine", TrialFamily::sine}};
    std::map<std::string, InertiaModel> const inertias{{"scalar", InertiaModel::scalar_factor},
                                                       {"eringen", InertiaModel::eringen}};

    auto* alpha = app.add_option("--alpha", cfg.alpha, "filling ratio in (0, 1]")
                      ->delimiter(',')
                      ->check(detail::open_unit_interval());
    auto* holes = app.add_option("--n-holes", cfg.n_holes, "rows of perforations")
                      ->delimiter(',')
                      ->check(CLI::Range(1, 1000000));
    auto* nonlocal = app.add_option("--nonlocal", cfg.nonlocal, "nonlocal parameter, >= 0")
                         ->delimiter(',')
                         ->check(CLI::Range(0.0, 1e6));
    app.add_option("--slenderness", cfg.slenderness, "thickness over length")->check(detail::positive());
    app.add_option("--order", cfg.order, "Chebyshev degree of the free function")->check(CLI::Range(4, 40));
    app.add_option("--points", cfg.points, "collocation points")->check(CLI::Range(2, 100000));
    app.add_option("--galerkin-size", cfg.galerkin_size, "Galerkin trial functions")->check(CLI::Range(1, 20));
    app.add_option("--method", cfg.method, "static training path")->transform(CLI::CheckedTransformer(methods));
    app.add_option("--seed", cfg.seed, "seed for the initial weights");
    app.add_option("--samples", cfg.samples, "output sample count on [0, 1]")->check(CLI::Range(2, 1000000));
    app.add_option("--output", cfg.output, "write to this file instead of stdout");
    OutputFormat fmt = OutputFormat::csv;
    auto* format = app.add_option("--format", fmt, "csv or json")->transform(CLI::CheckedTransformer(formats));
    app.add_option("--grid", cfg.grid, "collocation grid")->transform(CLI::CheckedTransformer(grids));
    app.add_option("--basis", cfg.basis, "Galerkin trial family")->transform(CLI::CheckedTransformer(bases));
    app.add_option("--inertia", cfg.inertia, "nonlocal inertia model")->transform(CLI::CheckedTransformer(inertias));

    app.add_subcommand("static", "static deflection profile");
    app.add_subcommand("dynamic", "fundamental mode profile and frequency parameter");
    app.add_subcommand("ratio", "dynamic/static ratio report");
    app.add_subcommand("sweep", "probe values over a case grid (defaults to the reference cases)");
    app.add_subcommand("validate", "regression against the reference tables");

    std::reverse(args.begin(), args.end());
    app.parse(args);

    cfg.command = app.get_subcommands().front()->get_name();
    if (*format) {
        cfg.format = fmt;
    }
    cfg.case_flags_given = alpha->count() > 0 || holes->count() > 0 || nonlocal->count() > 0;
    detail::check_cross_constraints(cfg);
}

/// Runs one invocation; returns the process exit status.
inline int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bending and vibration of perforated nanobeams", "perfbeam"};
    RunConfig cfg;
    try {
        parse(args, cfg, app);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return static_cast<int>(ExitCode::success);
    } catch (CLI::ParseError const& e) {
        err << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (UsageError const& e) {
        err << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    }

    std::ostringstream buffer;
    ExitCode code = ExitCode::success;
    try {
        if (cfg.command == "static") {
            code = detail::emit_static(cfg, buffer);
        } else if (cfg.command == "dynamic") {
            code = detail::emit_dynamic(cfg, buffer);
        } else if (cfg.command == "ratio") {
            code = detail::emit_ratio(cfg, buffer);
        } else if (cfg.command == "sweep") {
            code = detail::emit_sweep(cfg, buffer);
        } else {
            code = detail::emit_validate(cfg, buffer);
        }
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::runtime);
    }

    if (cfg.output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "usage error: --output: cannot open " << cfg.output << " for writing\n";
            return static_cast<int>(ExitCode::usage);
        }
        file << buffer.str();
    }
    return static_cast<int>(code);
}

} // namespace perfbeam::cli
