#pragma once

#include "errors.hpp"

#include <cmath>
#include <string>

namespace perfbeam {

/// Nondimensional description of a simply supported perforated nanobeam.
///
/// Dimensional quantities (modulus, density, load amplitude, length) are
/// absorbed into the scaled deflection and the frequency parameter, so the
/// case is fully described by four numbers.
struct BeamCase {
    double alpha = 1.0;       ///< filling ratio t/s, in (0, 1]
    int n_holes = 1;          ///< rows of square perforations, >= 1
    double nonlocal = 0.0;    ///< e0*a / l, >= 0
    double slenderness = 0.1; ///< h / l, > 0; only the rotary-inertia term uses it

    /// Throws DomainError naming the first offending field.
    void validate() const {
        if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
            throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
        }
        if (n_holes < 1) {
            throw DomainError("n_holes must be >= 1, got " + std::to_string(n_holes));
        }
        if (!std::isfinite(nonlocal) || nonlocal < 0.0) {
            throw DomainError("nonlocal must be >= 0, got " + std::to_string(nonlocal));
        }
        if (!std::isfinite(slenderness) || slenderness <= 0.0) {
            throw DomainError("slenderness must be > 0, got " + std::to_string(slenderness));
        }
    }

    /// h^2 / (12 l^2), the rotary-inertia group.
    [[nodiscard]] double rotary_group() const noexcept { return slenderness * slenderness / 12.0; }

    friend bool operator==(BeamCase const&, BeamCase const&) = default;
};

/// Multipliers of the solid-beam [EI], [rho A] and [rho I].
struct EffectiveCoefficients {
    double p1 = 1.0; ///< bending stiffness
    double p2 = 1.0; ///< mass per unit length
    double p3 = 1.0; ///< rotary inertia per unit length
};

/// Square-hole periodic perforation multipliers.
///
/// Each rational is evaluated in its factored form so results
/// are reproducible. Note that p3 is not 1 for a solid beam: at alpha = 1 it
/// reduces to (N^2 + 2N + 2) / (N + 1)^2.
[[nodiscard]] inline EffectiveCoefficients effective_coefficients(BeamCase const& beam) {
    beam.validate();
    double const a = beam.alpha;
    double const n = static_cast<double>(beam.n_holes);
    double const a2 = a * a;
    double const a3 = a2 * a;

    double const p1_num = a * (n + 1.0) * (n * n + 2.0 * n + a2);
    double const p1_den = (1.0 - a2 + a3) * n * n * n + 3.0 * a * n * n +
                          (3.0 + 2.0 * a - 3.0 * a2 + a3) * a2 * n + a3;

    double const p2 = (1.0 - n * (a - 2.0)) * a / (n + a);

    double const p3_num =
        a * ((2.0 - a) * n * n * n + 3.0 * n * n - 2.0 * (a - 3.0) * (a2 - a + 1.0) * n + a2 + 1.0);
    double const n_plus_a = n + a;
    double const p3 = p3_num / (n_plus_a * n_plus_a * n_plus_a);

    return {p1_num / p1_den, p2, p3};
}

} // namespace perfbeam
