#pragma once

#include <array>

namespace perfbeam::reference {

/// One reference row group: a beam case with three probe locations and the
/// static deflection, dynamic deflection and dynamic/static ratio at each.
struct TableRow {
    double alpha;
    int n_holes;
    double nonlocal;
    std::array<double, 3> probes;
    std::array<double, 3> static_values;
    std::array<double, 3> dynamic_values;
    double ratio_constant;
    /// Index into `probes` of the location the dynamic shape ratios are taken against.
    int anchor;
};

/// Filling ratio and hole rows at nonlocal 0.2.
inline constexpr std::array<TableRow, 6> filling_ratio_table{{
    {0.3, 1, 0.2, {0.3, 0.5, 0.9}, {1.3534, 1.6729, 0.5170}, {122.7182, 151.6880, 46.8742}, 90.6711, 1},
    {0.3, 2, 0.2, {0.3, 0.5, 0.9}, {1.8658, 2.3063, 0.7127}, {127.8701, 158.0562, 48.8420}, 68.5328, 1},
    {0.5, 1, 0.2, {0.3, 0.5, 0.9}, {1.1918, 1.4732, 0.4552}, {106.1157, 131.1662, 40.5326}, 89.0357, 1},
    {0.5, 2, 0.2, {0.3, 0.5, 0.9}, {1.3866, 1.7139, 0.5296}, {108.3056, 133.8730, 41.3690}, 78.1092, 1},
    {0.7, 1, 0.2, {0.3, 0.5, 0.9}, {1.1617, 1.4359, 0.4437}, {99.5418, 123.0404, 38.0216}, 85.6876, 1},
    {0.7, 2, 0.2, {0.3, 0.5, 0.9}, {1.2199, 1.5078, 0.4659}, {100.2720, 123.9430, 38.3005}, 82.2000, 1},
}};

/// Nonlocal parameter and hole rows at filling ratio 0.5.
inline constexpr std::array<TableRow, 4> nonlocal_table{{
    {0.5, 1, 0.1, {0.1, 0.6, 0.8}, {0.3586, 1.1037, 0.6821}, {45.6687, 140.5539, 86.8671}, 127.3527, 1},
    {0.5, 2, 0.2, {0.1, 0.6, 0.8}, {0.5296, 1.6300, 1.0074}, {41.3690, 127.3208, 78.6886}, 78.1092, 1},
    {0.5, 3, 0.3, {0.1, 0.6, 0.8}, {0.7813, 2.4047, 1.4862}, {35.8767, 110.4171, 68.2415}, 45.9186, 1},
    {0.5, 4, 0.4, {0.1, 0.6, 0.8}, {1.1269, 3.4683, 2.1435}, {30.8541, 94.9590, 58.6879}, 27.3792, 1},
}};

/// Dynamic deflection against Galerkin basis size for alpha 0.5, N 2,
/// nonlocal 0.2 at X = 0.3, 0.5, 0.9.
struct ConvergenceRow {
    int basis_size;
    std::array<double, 3> values;
};

inline constexpr std::array<double, 3> convergence_probes{0.3, 0.5, 0.9};

inline constexpr std::array<ConvergenceRow, 8> convergence_table{{
    {8, {108.3092, 133.8678, 41.3674}},
    {9, {108.3056, 133.8730, 41.3690}},
    {10, {108.3056, 133.8730, 41.3690}},
    {11, {108.3056, 133.8730, 41.3690}},
    {12, {108.3056, 133.8730, 41.3690}},
    {13, {108.3056, 133.8730, 41.3690}},
    {14, {108.3056, 133.8730, 41.3690}},
    {15, {108.3056, 133.8730, 41.3690}},
}};

} // namespace perfbeam::reference
