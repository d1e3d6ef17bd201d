// Static deflection, fundamental mode and their ratio for a few perforated beams.

#include <perfbeam/perfbeam.hpp>

#include <cstdio>
#include <vector>

int main() {
    using namespace perfbeam;

    std::vector<BeamCase> const cases{
        {0.3, 1, 0.2, 0.1},
        {0.5, 2, 0.2, 0.1},
        {0.7, 2, 0.2, 0.1},
        {0.5, 4, 0.4, 0.1},
    };

    auto const samples = uniform_samples(101);
    SolverSettings settings;
    settings.static_options.method = SolveMethod::lbfgs;

    std::printf("%6s %3s %8s  %10s %10s %10s %12s %12s\n", "alpha", "N", "nonlocal", "W_s(0.5)", "lambda",
                "oracle", "W_d/W_s", "spread");
    for (auto const& beam : cases) {
        auto const r = solve_case(beam, settings, samples);
        std::printf("%6.2f %3d %8.2f  %10.6f %10.6f %10.6f %12.6f %12.3e\n", beam.alpha, beam.n_holes, beam.nonlocal,
                    r.static_profile.values[50], r.mode.lambda, lambda_oracle(beam), r.ratio.mean_ratio,
                    r.ratio.relative_spread);
    }

    // The same case trained through both paths.
    StaticProblem const problem(cases[1]);
    StaticSolveOptions direct;
    direct.method = SolveMethod::direct;
    StaticSolveOptions lbfgs;
    lbfgs.method = SolveMethod::lbfgs;
    auto const a = solve(problem, direct);
    auto const b = solve(problem, lbfgs);
    std::printf("\nmean-square residual: direct %.3e, L-BFGS %.3e (%zu iterations)\n", a.report.mean_square_residual,
                b.report.mean_square_residual, b.report.optim->total_iterations);
    return 0;
}
