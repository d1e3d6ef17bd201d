#pragma once

#include "errors.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perfbeam {

/// Chebyshev polynomials of the first kind composed with z = 2X - 1, so the
/// physical interval [0, 1] maps onto [-1, 1].
struct MappedChebyshevBasis {
    static constexpr int max_derivative = 4;

    std::size_t order = 14; ///< highest degree; the basis has order + 1 terms

    [[nodiscard]] std::size_t size() const noexcept { return order + 1; }

    /// d^k/dX^k T_j(2X - 1) for j = 0..order, written into `out`.
    ///
    /// Derivatives come from differentiating the three-term recurrence k times:
    /// T_{j+1}^(k) = 2z T_j^(k) + 2k T_j^(k-1) - T_{j-1}^(k).
    void eval(double x, int deriv_order, std::span<double> out) const {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("basis evaluation point must lie in [0, 1], got " + std::to_string(x));
        }
        if (deriv_order < 0 || deriv_order > max_derivative) {
            throw DomainError("derivative order must lie in 0..4, got " + std::to_string(deriv_order));
        }
        if (out.size() != size()) {
            throw DomainError("output span has wrong length");
        }

        double const z = 2.0 * x - 1.0;
        // rows[k][j] = T_j^(k)(z); only the rows up to deriv_order are needed.
        std::array<std::vector<double>, max_derivative + 1> rows;
        for (int k = 0; k <= deriv_order; ++k) {
            auto& row = rows[static_cast<std::size_t>(k)];
            row.assign(size(), 0.0);
            row[0] = (k == 0) ? 1.0 : 0.0;
            if (order >= 1) {
                row[1] = (k == 0) ? z : (k == 1 ? 1.0 : 0.0);
            }
            for (std::size_t j = 1; j + 1 < size(); ++j) {
                double next = 2.0 * z * row[j] - row[j - 1];
                if (k > 0) {
                    next += 2.0 * k * rows[static_cast<std::size_t>(k - 1)][j];
                }
                row[j + 1] = next;
            }
        }

        double scale = 1.0;
        for (int k = 0; k < deriv_order; ++k) {
            scale *= 2.0;
        }
        auto const& result = rows[static_cast<std::size_t>(deriv_order)];
        for (std::size_t j = 0; j < size(); ++j) {
            out[j] = scale * result[j];
        }
    }

    [[nodiscard]] std::vector<double> eval(double x, int deriv_order) const {
        std::vector<double> out(size());
        eval(x, deriv_order, out);
        return out;
    }
};

[[nodiscard]] inline std::vector<double> eval_basis(MappedChebyshevBasis const& basis, double x, int deriv_order) {
    return basis.eval(x, deriv_order);
}

} // namespace perfbeam
