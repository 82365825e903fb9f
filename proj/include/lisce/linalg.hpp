// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "lisce/errors.hpp"
#include "lisce/types.hpp"

namespace lisce {

using Vec2c = std::array<cplx, 2>;
using Mat2c = std::array<std::array<cplx, 2>, 2>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

namespace detail {

inline double row_norm_product_2x2(const Mat2c& m) {
    double r0 = std::max(std::abs(m[0][0]), std::abs(m[0][1]));
    double r1 = std::max(std::abs(m[1][0]), std::abs(m[1][1]));
    return r0 * r1;
}

inline double row_norm_product_3x3(const Mat3& m) {
    double p = 1.0;
    for (const auto& row : m) {
        p *= std::max({std::abs(row[0]), std::abs(row[1]), std::abs(row[2])});
    }
    return p;
}

}  // namespace detail

/// Scale-invariant singularity guard: a solve is rejected when
/// |det| <= 1e-12 * (product of row max-norms).
inline constexpr double kSingularityGuard = 1e-12;

inline cplx det_2x2(const Mat2c& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

/// True when the guard admits a solve against `m`.
inline bool solvable_2x2(const Mat2c& m) {
    return std::abs(det_2x2(m)) > kSingularityGuard * detail::row_norm_product_2x2(m);
}

/// Solve M x = v by Cramer's rule.
inline Vec2c solve_2x2(const Mat2c& m, const Vec2c& v) {
    cplx det = det_2x2(m);
    if (!(std::abs(det) > kSingularityGuard * detail::row_norm_product_2x2(m))) {
        throw singular_matrix_error("solve_2x2: matrix is singular to working guard",
                                    std::abs(det));
    }
    return {(m[1][1] * v[0] - m[0][1] * v[1]) / det, (m[0][0] * v[1] - m[1][0] * v[0]) / det};
}

inline double det_3x3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Invert a 3x3 real matrix via the adjugate, with one Newton-Schulz
/// refinement pass to hold accuracy on poorly conditioned inputs.
inline Mat3 invert_3x3(const Mat3& m) {
    double det = det_3x3(m);
    if (!(std::abs(det) > kSingularityGuard * detail::row_norm_product_3x3(m))) {
        throw singular_matrix_error("invert_3x3: matrix is singular to working guard",
                                    std::abs(det));
    }
    Mat3 inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;

    // inv <- inv (2 I - m inv)
    Mat3 mi{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += m[i][k] * inv[k][j];
            mi[i][j] = (i == j ? 2.0 : 0.0) - acc;
        }
    }
    Mat3 refined{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += inv[i][k] * mi[k][j];
            refined[i][j] = acc;
        }
    }
    return refined;
}

}  // namespace lisce
