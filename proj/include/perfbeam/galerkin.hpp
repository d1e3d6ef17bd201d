#pragma once

#include "errors.hpp"
#include "linalg.hpp"
#include "perforation.hpp"
#include "profile.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace perfbeam {

/// Trial families for the Rayleigh-Ritz projection. Every member vanishes at
/// X = 0 and X = 1; the zero-moment condition is natural in the weak form.
enum class TrialFamily {
    legendre_bubble, ///< X(1-X) P_{k-1}(2X-1); spans the same space as monomial_bubble
    monomial_bubble, ///< X^k (1-X); ill-conditioned beyond about 11 terms
    sine,            ///< sin(k pi X); the exact mode at k = 1
};

/// How the nonlocal parameter enters the inertia terms.
enum class InertiaModel {
    scalar_factor, ///< (1 - abar^2) [P2 W - P3 r^2 W'']
    eringen,    ///< (1 - abar^2 d^2/dX^2) [P2 W - P3 r^2 W'']
};

[[nodiscard]] inline char const* to_string(TrialFamily f) noexcept {
    switch (f) {
    case TrialFamily::legendre_bubble: return "legendre-bubble";
    case TrialFamily::monomial_bubble: return "monomial-bubble";
    case TrialFamily::sine: return "sine";
    }
    return "unknown";
}

namespace detail {

/// P_j^(d)(z) for d = 0..2, j = 0..degree.
inline void legendre_table(std::size_t degree, double z, std::array<std::vector<double>, 3>& table) {
    for (std::size_t d = 0; d < 3; ++d) {
        auto& row = table[d];
        row.assign(degree + 1, 0.0);
        row[0] = d == 0 ? 1.0 : 0.0;
        if (degree >= 1) {
            row[1] = d == 0 ? z : (d == 1 ? 1.0 : 0.0);
        }
        for (std::size_t j = 1; j < degree; ++j) {
            double const jj = static_cast<double>(j);
            double t = (2.0 * jj + 1.0) * z * row[j];
            if (d > 0) {
                t += (2.0 * jj + 1.0) * static_cast<double>(d) * table[d - 1][j];
            }
            row[j + 1] = (t - jj * row[j - 1]) / (jj + 1.0);
        }
    }
}

struct GaussRule {
    std::vector<double> nodes;   ///< on [0, 1]
    std::vector<double> weights; ///< sum to 1
};

/// Gauss-Legendre rule on [0, 1] by Newton iteration on P_n.
[[nodiscard]] inline GaussRule gauss_legendre(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double const nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t j = 1; j < n; ++j) {
                double const jj = static_cast<double>(j);
                double const p2 = ((2.0 * jj + 1.0) * z * p1 - jj * p0) / (jj + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = nn * (z * p1 - p0) / (z * z - 1.0);
            double const dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

} // namespace detail

struct GalerkinBasis {
    std::size_t size = 14;
    TrialFamily family = TrialFamily::legendre_bubble;

    void validate() const {
        if (size < 1 || size > 20) {
            throw DomainError("Galerkin basis size must lie in 1..20, got " + std::to_string(size));
        }
    }

    /// Values and first two derivatives of every trial function at x:
    /// out[d][k] for d = 0..2, k = 0..size-1.
    void eval(double x, std::array<std::vector<double>, 3>& out) const {
        for (auto& row : out) {
            row.assign(size, 0.0);
        }
        switch (family) {
        case TrialFamily::legendre_bubble: {
            std::array<std::vector<double>, 3> leg;
            detail::legendre_table(size - 1, 2.0 * x - 1.0, leg);
            double const b0 = x - x * x;
            double const b1 = 1.0 - 2.0 * x;
            double const b2 = -2.0;
            for (std::size_t k = 0; k < size; ++k) {
                double const p = leg[0][k];
                double const dp = 2.0 * leg[1][k];
                double const ddp = 4.0 * leg[2][k];
                out[0][k] = b0 * p;
                out[1][k] = b1 * p + b0 * dp;
                out[2][k] = b2 * p + 2.0 * b1 * dp + b0 * ddp;
            }
            break;
        }
        case TrialFamily::monomial_bubble: {
            // X^k - X^(k+1), k = 1..size
            for (std::size_t k = 1; k <= size; ++k) {
                double const kk = static_cast<double>(k);
                double const xk2 = k >= 2 ? std::pow(x, kk - 2.0) : 0.0;
                double const xk1 = std::pow(x, kk - 1.0);
                double const xk = xk1 * x;
                out[0][k - 1] = xk - xk * x;
                out[1][k - 1] = kk * xk1 - (kk + 1.0) * xk;
                out[2][k - 1] = kk * (kk - 1.0) * xk2 - (kk + 1.0) * kk * xk1;
            }
            break;
        }
        case TrialFamily::sine: {
            for (std::size_t k = 1; k <= size; ++k) {
                double const w = static_cast<double>(k) * std::numbers::pi;
                out[0][k - 1] = std::sin(w * x);
                out[1][k - 1] = w * std::cos(w * x);
                out[2][k - 1] = -w * w * std::sin(w * x);
            }
            break;
        }
        }
    }

    /// Exact monomial coefficients of X^k (1 - X); only for monomial_bubble.
    [[nodiscard]] std::vector<std::vector<double>> monomial_coefficients() const {
        if (family != TrialFamily::monomial_bubble) {
            throw DomainError("monomial coefficients are only defined for the monomial bubble family");
        }
        std::vector<std::vector<double>> c(size, std::vector<double>(size + 2, 0.0));
        for (std::size_t k = 1; k <= size; ++k) {
            c[k - 1][k] = 1.0;
            c[k - 1][k + 1] = -1.0;
        }
        return c;
    }
};

/// K c = lambda^2 M c
struct GalerkinSystem {
    DenseMatrix stiffness;
    DenseMatrix mass;
    BeamCase beam;
    InertiaModel inertia = InertiaModel::scalar_factor;
};

namespace detail {

inline void check_inertia_domain(BeamCase const& beam, InertiaModel inertia) {
    beam.validate();
    if (inertia == InertiaModel::scalar_factor && beam.nonlocal >= 1.0) {
        throw DomainError("nonlocal parameter must be < 1 for a positive definite mass matrix, got " +
                          std::to_string(beam.nonlocal));
    }
}

} // namespace detail

/// Stiffness and mass matrices by Gauss-Legendre quadrature.
///
/// K_ij = P1 int phi_i'' phi_j''. The scalar-factor inertia model gives
/// M_ij = (1 - abar^2) [P2 int phi_i phi_j + P3 r^2 int phi_i' phi_j'].
/// 80 nodes integrate every polynomial product exactly and resolve the
/// sine family to round-off.
[[nodiscard]] inline GalerkinSystem assemble(BeamCase const& beam, GalerkinBasis const& basis,
                                             InertiaModel inertia = InertiaModel::scalar_factor) {
    detail::check_inertia_domain(beam, inertia);
    basis.validate();
    auto const c = effective_coefficients(beam);
    double const r2 = beam.rotary_group();
    double const ab2 = beam.nonlocal * beam.nonlocal;
    std::size_t const n = basis.size;

    GalerkinSystem sys{DenseMatrix(n, n), DenseMatrix(n, n), beam, inertia};
    auto const rule = detail::gauss_legendre(80);
    std::array<std::vector<double>, 3> phi;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        basis.eval(rule.nodes[q], phi);
        double const w = rule.weights[q];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                sys.stiffness(i, j) += w * c.p1 * phi[2][i] * phi[2][j];
                double const v00 = phi[0][i] * phi[0][j];
                double const v11 = phi[1][i] * phi[1][j];
                double const v22 = phi[2][i] * phi[2][j];
                double m = 0.0;
                if (inertia == InertiaModel::scalar_factor) {
                    m = (1.0 - ab2) * (c.p2 * v00 + c.p3 * r2 * v11);
                } else {
                    m = c.p2 * v00 + c.p3 * r2 * v11 + ab2 * (c.p2 * v11 + c.p3 * r2 * v22);
                }
                sys.mass(i, j) += w * m;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            sys.stiffness(i, j) = sys.stiffness(j, i);
            sys.mass(i, j) = sys.mass(j, i);
        }
    }
    return sys;
}

/// Same matrices for the monomial bubble family, integrated term by term
/// with int_0^1 X^p dX = 1 / (p + 1). Scalar-factor inertia model only.
[[nodiscard]] inline GalerkinSystem assemble_exact_monomial(BeamCase const& beam, GalerkinBasis const& basis) {
    detail::check_inertia_domain(beam, InertiaModel::scalar_factor);
    basis.validate();
    auto const coeffs = basis.monomial_coefficients();
    auto derivative = [](std::vector<double> const& p) {
        std::vector<double> d(p.size(), 0.0);
        for (std::size_t i = 1; i < p.size(); ++i) {
            d[i - 1] = static_cast<double>(i) * p[i];
        }
        return d;
    };
    auto integral_of_product = [](std::vector<double> const& a, std::vector<double> const& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                s += a[i] * b[j] / static_cast<double>(i + j + 1);
            }
        }
        return s;
    };

    auto const c = effective_coefficients(beam);
    double const r2 = beam.rotary_group();
    double const ab2 = beam.nonlocal * beam.nonlocal;
    std::size_t const n = basis.size;
    GalerkinSystem sys{DenseMatrix(n, n), DenseMatrix(n, n), beam, InertiaModel::scalar_factor};
    for (std::size_t i = 0; i < n; ++i) {
        auto const di = derivative(coeffs[i]);
        auto const ddi = derivative(di);
        for (std::size_t j = 0; j < n; ++j) {
            auto const dj = derivative(coeffs[j]);
            auto const ddj = derivative(dj);
            sys.stiffness(i, j) = c.p1 * integral_of_product(ddi, ddj);
            sys.mass(i, j) = (1.0 - ab2) * (c.p2 * integral_of_product(coeffs[i], coeffs[j]) +
                                            c.p3 * r2 * integral_of_product(di, dj));
        }
    }
    return sys;
}

enum class ModeNormalization { unit_max };

struct ModeResult {
    double lambda = 0.0; ///< fundamental frequency parameter
    std::vector<double> coefficients;
    ModeNormalization normalization = ModeNormalization::unit_max;
    GalerkinBasis basis;
};

/// Sum_k c_k phi_k(x)
[[nodiscard]] inline double reconstruct(GalerkinBasis const& basis, std::span<double const> coefficients, double x,
                                        int deriv_order = 0) {
    std::array<std::vector<double>, 3> phi;
    basis.eval(x, phi);
    double s = 0.0;
    for (std::size_t k = 0; k < basis.size; ++k) {
        s += coefficients[k] * phi[static_cast<std::size_t>(deriv_order)][k];
    }
    return s;
}

namespace detail {

/// Location of max |mode| on [0, 1]: dense scan, then golden-section
/// refinement of |mode| around the best sample.
[[nodiscard]] inline double locate_peak(GalerkinBasis const& basis, std::span<double const> c) {
    constexpr std::size_t scan = 2000;
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i <= scan; ++i) {
        double const x = static_cast<double>(i) / scan;
        double const v = std::abs(reconstruct(basis, c, x));
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = static_cast<double>(best == 0 ? 0 : best - 1) / scan;
    double hi = static_cast<double>(best == scan ? scan : best + 1) / scan;
    double const ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double fa = std::abs(reconstruct(basis, c, a));
    double fb = std::abs(reconstruct(basis, c, b));
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = std::abs(reconstruct(basis, c, b));
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = std::abs(reconstruct(basis, c, a));
        }
    }
    double const x = 0.5 * (lo + hi);
    double const scanned = static_cast<double>(best) / scan;
    return std::abs(reconstruct(basis, c, x)) >= best_val ? x : scanned;
}

} // namespace detail

/// Smallest eigenpair of the pencil, rescaled so the mode peaks at +1.
[[nodiscard]] inline ModeResult solve_fundamental(GalerkinSystem const& system, GalerkinBasis const& basis) {
    auto const pairs = generalized_sym_eig(system.stiffness, system.mass);
    auto const& first = pairs.front();
    if (!(first.value > 0.0)) {
        throw DomainError("smallest generalized eigenvalue is not positive");
    }
    ModeResult mode;
    mode.lambda = std::sqrt(first.value);
    mode.basis = basis;
    mode.coefficients = first.vector;
    double const peak = reconstruct(basis, mode.coefficients, detail::locate_peak(basis, mode.coefficients));
    for (double& e : mode.coefficients) {
        e /= peak;
    }
    return mode;
}

/// Frequency parameter from substituting W = sin(pi X):
/// scalar factor, lambda^2 = P1 pi^4 / [(1 - abar^2)(P2 + P3 r^2 pi^2)];
/// Eringen, lambda^2 = P1 pi^4 / [(1 + abar^2 pi^2)(P2 + P3 r^2 pi^2)].
[[nodiscard]] inline double lambda_oracle(BeamCase const& beam, InertiaModel inertia = InertiaModel::scalar_factor) {
    detail::check_inertia_domain(beam, inertia);
    auto const c = effective_coefficients(beam);
    double const pi = std::numbers::pi;
    double const pi2 = pi * pi;
    double const ab2 = beam.nonlocal * beam.nonlocal;
    double const inertia_factor = inertia == InertiaModel::scalar_factor ? 1.0 - ab2 : 1.0 + ab2 * pi2;
    return std::sqrt(c.p1 * pi2 * pi2 / (inertia_factor * (c.p2 + c.p3 * beam.rotary_group() * pi2)));
}

[[nodiscard]] inline DeflectionProfile dynamic_deflection(ModeResult const& mode, std::span<double const> samples) {
    DeflectionProfile p;
    p.kind = ProfileKind::dynamic_deflection;
    p.x.assign(samples.begin(), samples.end());
    p.values.reserve(samples.size());
    for (double x : samples) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("sample point must lie in [0, 1], got " + std::to_string(x));
        }
        p.values.push_back(presentation_scale * reconstruct(mode.basis, mode.coefficients, x));
    }
    return p;
}

} // namespace perfbeam
