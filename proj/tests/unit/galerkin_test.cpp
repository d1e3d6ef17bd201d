#include <perfbeam/galerkin.hpp>
#include <perfbeam/reference_tables.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

using namespace perfbeam;

namespace {

constexpr double pi = std::numbers::pi;

BeamCase const reference_case{0.5, 2, 0.2, 0.1};

std::vector<BeamCase> table_cases() {
    std::vector<BeamCase> cases;
    for (auto const& row : reference::filling_ratio_table) {
        cases.push_back({row.alpha, row.n_holes, row.nonlocal, 0.1});
    }
    for (auto const& row : reference::nonlocal_table) {
        cases.push_back({row.alpha, row.n_holes, row.nonlocal, 0.1});
    }
    return cases;
}

GalerkinBasis basis_of(std::size_t n, TrialFamily family = TrialFamily::legendre_bubble) {
    GalerkinBasis b;
    b.size = n;
    b.family = family;
    return b;
}

double quad(GalerkinBasis const& b, std::vector<double> const& c, std::vector<double> const& d, int k) {
    // int (sum c phi^(k)) (sum d phi^(k)) by a fine composite Simpson rule
    constexpr int m = 4000;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
        double const x = static_cast<double>(i) / m;
        double const w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * reconstruct(b, c, x, k) * reconstruct(b, d, x, k);
    }
    return s / (3.0 * m);
}

} // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    auto const rule = detail::gauss_legendre(80);
    double wsum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        wsum += rule.weights[i];
        EXPECT_GT(rule.nodes[i], 0.0);
        EXPECT_LT(rule.nodes[i], 1.0);
        if (i > 0) {
            EXPECT_GT(rule.nodes[i], rule.nodes[i - 1]);
        }
    }
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    for (int p : {1, 5, 30, 100, 159}) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            s += rule.weights[i] * std::pow(rule.nodes[i], p);
        }
        EXPECT_NEAR(s, 1.0 / (p + 1.0), 1e-14) << "degree " << p;
    }
}

TEST(GalerkinBasis, TrialFunctionsVanishAtEnds) {
    for (auto fam : {TrialFamily::legendre_bubble, TrialFamily::monomial_bubble, TrialFamily::sine}) {
        auto const b = basis_of(20, fam);
        std::array<std::vector<double>, 3> phi;
        for (double x : {0.0, 1.0}) {
            b.eval(x, phi);
            for (double v : phi[0]) {
                EXPECT_LE(std::abs(v), 1e-14);
            }
        }
    }
}

TEST(GalerkinBasis, DerivativesMatchFiniteDifferences) {
    for (auto fam : {TrialFamily::legendre_bubble, TrialFamily::monomial_bubble, TrialFamily::sine}) {
        auto const b = basis_of(8, fam);
        std::array<std::vector<double>, 3> lo;
        std::array<std::vector<double>, 3> mid;
        std::array<std::vector<double>, 3> hi;
        double const h = 1e-5;
        for (double x : {0.2, 0.55, 0.9}) {
            b.eval(x - h, lo);
            b.eval(x, mid);
            b.eval(x + h, hi);
            for (std::size_t k = 0; k < b.size; ++k) {
                double const d1 = (hi[0][k] - lo[0][k]) / (2 * h);
                double const d2 = (hi[1][k] - lo[1][k]) / (2 * h);
                EXPECT_NEAR(mid[1][k], d1, 1e-6 * (1.0 + std::abs(d1)));
                EXPECT_NEAR(mid[2][k], d2, 1e-6 * (1.0 + std::abs(d2)));
            }
        }
    }
}

TEST(GalerkinBasis, SizeOutOfRangeRejected) {
    EXPECT_THROW(assemble(reference_case, basis_of(0)), DomainError);
    EXPECT_THROW(assemble(reference_case, basis_of(21)), DomainError);
}

TEST(Assemble, SingleTermEntries) {
    auto const b = basis_of(1, TrialFamily::monomial_bubble);
    auto const sys = assemble(reference_case, b);
    auto const c = effective_coefficients(reference_case);
    double const r2 = 0.01 / 12.0;
    EXPECT_NEAR(sys.stiffness(0, 0), 4.0 * c.p1, 1e-13);
    EXPECT_NEAR(sys.mass(0, 0), (1.0 - 0.04) * (c.p2 / 30.0 + c.p3 * r2 / 3.0), 1e-15);
}

TEST(Assemble, MatricesSymmetric) {
    for (auto inertia : {InertiaModel::scalar_factor, InertiaModel::eringen}) {
        auto const sys = assemble(reference_case, basis_of(14), inertia);
        EXPECT_EQ((sys.stiffness - sys.stiffness.transposed()).max_abs(), 0.0);
        EXPECT_EQ((sys.mass - sys.mass.transposed()).max_abs(), 0.0);
        EXPECT_NO_THROW(cholesky(sys.stiffness));
        EXPECT_NO_THROW(cholesky(sys.mass));
    }
}

TEST(Assemble, QuadratureMatchesExactMonomialIntegration) {
    auto const b = basis_of(8, TrialFamily::monomial_bubble);
    auto const q = assemble(reference_case, b);
    auto const e = assemble_exact_monomial(reference_case, b);
    EXPECT_LE((q.stiffness - e.stiffness).max_abs(), 1e-12 * e.stiffness.max_abs());
    EXPECT_LE((q.mass - e.mass).max_abs(), 1e-12 * e.mass.max_abs());
}

TEST(Assemble, NonlocalAtOrAboveOneRejected) {
    EXPECT_THROW(assemble({0.5, 2, 1.0, 0.1}, basis_of(4)), DomainError);
    EXPECT_THROW(assemble({0.5, 2, 1.3, 0.1}, basis_of(4)), DomainError);
    EXPECT_THROW(static_cast<void>(lambda_oracle({0.5, 2, 1.0, 0.1})), DomainError);
    EXPECT_NO_THROW(assemble({0.5, 2, 1.3, 0.1}, basis_of(4), InertiaModel::eringen));
}

TEST(SolveFundamental, SingleTermClosedForm) {
    auto const b = basis_of(1, TrialFamily::monomial_bubble);
    auto const mode = solve_fundamental(assemble(reference_case, b), b);
    auto const c = effective_coefficients(reference_case);
    double const r2 = reference_case.rotary_group();
    double const expected = 4.0 * c.p1 / ((1.0 - 0.04) * (c.p2 / 30.0 + c.p3 * r2 / 3.0));
    EXPECT_NEAR(mode.lambda * mode.lambda, expected, 1e-12 * expected);
}

TEST(SolveFundamental, SineBasisExactAtOneTerm) {
    auto const b = basis_of(1, TrialFamily::sine);
    auto const mode = solve_fundamental(assemble(reference_case, b), b);
    EXPECT_NEAR(mode.lambda, lambda_oracle(reference_case), 1e-12 * mode.lambda);
}

TEST(SolveFundamental, MonomialAndLegendreFamiliesAgree) {
    auto const bm = basis_of(10, TrialFamily::monomial_bubble);
    auto const bl = basis_of(10);
    auto const mm = solve_fundamental(assemble(reference_case, bm), bm);
    auto const ml = solve_fundamental(assemble(reference_case, bl), bl);
    EXPECT_NEAR(mm.lambda, ml.lambda, 1e-9 * ml.lambda);
    for (double x : {0.1, 0.3, 0.5, 0.9}) {
        EXPECT_NEAR(reconstruct(bm, mm.coefficients, x), reconstruct(bl, ml.coefficients, x), 1e-7);
    }
}

TEST(LambdaOracle, ClassicalLimit) {
    double const l = lambda_oracle({1.0, 1, 0.0, 1e-8});
    EXPECT_NEAR(l * l, std::pow(pi, 4), 1e-9);
}

TEST(LambdaOracle, ReferenceValue) {
    double const l = lambda_oracle({0.5, 2, 0.2, 1e-8});
    EXPECT_NEAR(l * l, 105.97, 0.01);
    auto const c = effective_coefficients({0.5, 2, 0.2, 1e-8});
    EXPECT_NEAR(l * l, c.p1 * std::pow(pi, 4) / (0.96 * c.p2), 1e-10);
}

TEST(LambdaOracle, IncreasesWithNonlocalUnderScalarFactor) {
    double prev = 0.0;
    for (double ab : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        double const l = lambda_oracle({0.5, 2, ab, 0.1});
        EXPECT_GT(l, prev);
        prev = l;
    }
}

TEST(SolveFundamental, EringenVariantMatchesItsOracle) {
    auto const b = basis_of(14);
    for (double ab : {0.1, 0.4, 1.5}) {
        BeamCase const beam{0.5, 2, ab, 0.1};
        auto const mode = solve_fundamental(assemble(beam, b, InertiaModel::eringen), b);
        double const oracle = lambda_oracle(beam, InertiaModel::eringen);
        EXPECT_NEAR(mode.lambda, oracle, 1e-8 * oracle);
    }
}

TEST(SolveFundamental, EigenvaluesNonIncreasingInBasisSize) {
    // Rayleigh-Ritz upper bounds on nested spaces; the slack absorbs the
    // ~1e-14 relative eigen-solver round-off once the bound has converged.
    for (auto const& beam : table_cases()) {
        double prev = INFINITY;
        for (std::size_t n = 1; n <= 20; ++n) {
            auto const b = basis_of(n);
            double const l2 = std::pow(solve_fundamental(assemble(beam, b), b).lambda, 2);
            EXPECT_LE(l2, prev * (1.0 + 1e-12)) << "n = " << n;
            EXPECT_GE(l2, std::pow(lambda_oracle(beam), 2) * (1.0 - 1e-12)) << "n = " << n;
            prev = l2;
        }
    }
}

TEST(SolveFundamental, EigenvectorsAreMassOrthonormal) {
    auto const sys = assemble(reference_case, basis_of(14));
    auto const pairs = generalized_sym_eig(sys.stiffness, sys.mass);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto const mi = multiply(sys.mass, pairs[i].vector);
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < mi.size(); ++k) {
                s += mi[k] * pairs[j].vector[k];
            }
            EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-8);
        }
    }
}

TEST(SolveFundamental, ModeIsUnitMaxAndVanishesAtEnds) {
    auto const b = basis_of(14);
    auto const mode = solve_fundamental(assemble(reference_case, b), b);
    EXPECT_GT(mode.lambda, 0.0);
    EXPECT_NEAR(reconstruct(b, mode.coefficients, 0.5), 1.0, 1e-12);
    std::vector<double> const ends{0.0, 1.0};
    auto const p = dynamic_deflection(mode, ends);
    EXPECT_EQ(p.kind, ProfileKind::dynamic_deflection);
    EXPECT_LE(std::abs(p.values[0]), 1e-12);
    EXPECT_LE(std::abs(p.values[1]), 1e-12);
}

TEST(SolveFundamental, MassNormalizedRayleighQuotient) {
    auto const b = basis_of(6);
    auto const mode = solve_fundamental(assemble(reference_case, b), b);
    auto const c = effective_coefficients(reference_case);
    double const r2 = reference_case.rotary_group();
    double const k = c.p1 * quad(b, mode.coefficients, mode.coefficients, 2);
    double const m = 0.96 * (c.p2 * quad(b, mode.coefficients, mode.coefficients, 0) +
                             c.p3 * r2 * quad(b, mode.coefficients, mode.coefficients, 1));
    EXPECT_NEAR(k / m, mode.lambda * mode.lambda, 1e-8 * k / m);
}

TEST(DynamicDeflection, RejectsSamplesOutsideDomain) {
    auto const b = basis_of(4);
    auto const mode = solve_fundamental(assemble(reference_case, b), b);
    std::vector<double> const bad{1.5};
    EXPECT_THROW(dynamic_deflection(mode, bad), DomainError);
}

TEST(DynamicDeflection, ReferenceShapeRatios) {
    auto const b = basis_of(14);
    std::vector<double> const x{0.3, 0.5, 0.9};
    auto const p = dynamic_deflection(solve_fundamental(assemble({0.3, 1, 0.2, 0.1}, b), b), x);
    EXPECT_NEAR(p.values[0] / p.values[1], 0.8090, 1e-4);
    auto const q = dynamic_deflection(solve_fundamental(assemble(reference_case, b), b), x);
    EXPECT_NEAR(q.values[2] / q.values[1], 0.3090, 1e-4);
}

TEST(DynamicDeflection, ConvergedForTenOrMoreTerms) {
    std::vector<double> const x(reference::convergence_probes.begin(), reference::convergence_probes.end());
    auto const b15 = basis_of(15);
    auto const ref = dynamic_deflection(solve_fundamental(assemble(reference_case, b15), b15), x);
    for (std::size_t n = 10; n <= 15; ++n) {
        auto const b = basis_of(n);
        auto const p = dynamic_deflection(solve_fundamental(assemble(reference_case, b), b), x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            EXPECT_NEAR(p.values[i], ref.values[i], 1e-4) << "n = " << n;
        }
    }
}

class GalerkinTableCase : public ::testing::TestWithParam<BeamCase> {};

TEST_P(GalerkinTableCase, LambdaMatchesOracle) {
    auto const b = basis_of(14);
    auto const mode = solve_fundamental(assemble(GetParam(), b), b);
    double const oracle = lambda_oracle(GetParam());
    EXPECT_NEAR(mode.lambda, oracle, 1e-8 * oracle);
}

TEST_P(GalerkinTableCase, ModeMatchesSine) {
    auto const b = basis_of(14);
    auto const mode = solve_fundamental(assemble(GetParam(), b), b);
    for (int i = 0; i <= 200; ++i) {
        double const x = i / 200.0;
        EXPECT_NEAR(reconstruct(b, mode.coefficients, x), std::sin(pi * x), 1e-6);
    }
}

INSTANTIATE_TEST_SUITE_P(ReferenceCases, GalerkinTableCase, ::testing::ValuesIn(table_cases()));
