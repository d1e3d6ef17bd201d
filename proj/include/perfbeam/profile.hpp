#pragma once

#include "errors.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace perfbeam {

enum class ProfileKind { static_deflection, dynamic_deflection };

/// Deflection sampled over [0, 1], already multiplied by 100 for presentation.
struct DeflectionProfile {
    std::vector<double> x;
    std::vector<double> values;
    ProfileKind kind = ProfileKind::static_deflection;

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
};

inline constexpr double presentation_scale = 100.0;

/// count points i / (count - 1); the last one is exactly 1.
[[nodiscard]] inline std::vector<double> uniform_samples(std::size_t count) {
    if (count < 2) {
        throw DomainError("need at least two sample points, got " + std::to_string(count));
    }
    std::vector<double> x(count);
    double const denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        x[i] = static_cast<double>(i) / denom;
    }
    return x;
}

} // namespace perfbeam
