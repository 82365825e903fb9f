// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lisce/errors.hpp"
#include "lisce/linalg.hpp"
#include "lisce/signal.hpp"
#include "lisce/types.hpp"

namespace lisce {

/// Real parametrization z = [Re(h), Im(h), eta] used by the bounds.
struct RealParamVector {
    double re_h = 0.0;
    double im_h = 0.0;
    double eta = 0.0;
};

/// Variance lower bounds for the three real parameters.
struct CrlbBundle {
    double re_h_bound = 0.0;
    double im_h_bound = 0.0;
    double eta_bound = 0.0;
};

namespace detail {

inline void check_crlb_args(double energy1, double energy2, double sigma_w2) {
    if (!(energy1 > 0.0) || !(energy2 > 0.0)) {
        throw invalid_parameter_error("crlb: pilot energies must be positive");
    }
    if (!(sigma_w2 > 0.0)) {
        throw invalid_parameter_error("crlb: noise variance must be positive");
    }
}

}  // namespace detail

/// Fisher information of z for the stacked pilot model:
///   (2 / sigma_w2) * [[a+b, 0, b], [0, a+b, 0], [b, 0, b]]
/// with a = s_p1^H s_p1 and b = s_p2^H s_p2.
inline Mat3 fim(double energy1, double energy2, double sigma_w2) {
    detail::check_crlb_args(energy1, energy2, sigma_w2);
    double s = 2.0 / sigma_w2;
    double ab = energy1 + energy2;
    double b = energy2;
    return Mat3{{{s * ab, 0.0, s * b}, {0.0, s * ab, 0.0}, {s * b, 0.0, s * b}}};
}

/// General Gaussian-linear FIM: F_mn = (2 / sigma_w2) * Re(j_m^H j_n) where
/// j_m is column m of the mean Jacobian d mu / d z.  The noise covariance is
/// constant, so the trace term of the general formula vanishes.
inline Mat3 fim_gaussian_linear(const std::vector<std::array<cplx, 3>>& jacobian,
                                double sigma_w2) {
    if (!(sigma_w2 > 0.0)) {
        throw invalid_parameter_error("fim_gaussian_linear: noise variance must be positive");
    }
    Mat3 f{};
    for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t n = 0; n < 3; ++n) {
            double acc = 0.0;
            for (const auto& row : jacobian) {
                acc += (std::conj(row[m]) * row[n]).real();
            }
            f[m][n] = 2.0 / sigma_w2 * acc;
        }
    }
    return f;
}

/// Closed-form bounds:
///   var(Re h) >= sigma_w2 / (2 a)
///   var(Im h) >= sigma_w2 / (2 (a + b))
///   var(eta)  >= sigma_w2 / (2 a) + sigma_w2 / (2 b)
inline CrlbBundle crlb_closed_form(double energy1, double energy2, double sigma_w2) {
    detail::check_crlb_args(energy1, energy2, sigma_w2);
    return {sigma_w2 / (2.0 * energy1), sigma_w2 / (2.0 * (energy1 + energy2)),
            sigma_w2 / (2.0 * energy1) + sigma_w2 / (2.0 * energy2)};
}

/// Same bounds through numeric inversion of the FIM.
inline CrlbBundle crlb_numeric(double energy1, double energy2, double sigma_w2) {
    Mat3 inv = invert_3x3(fim(energy1, energy2, sigma_w2));
    return {inv[0][0], inv[1][1], inv[2][2]};
}

/// Convenience: bounds for a pilot frame at a given noise level.
inline CrlbBundle crlb_for_frame(const PilotFrame& frame, double sigma_w2) {
    return crlb_closed_form(frame.energy1(), frame.energy2(), sigma_w2);
}

}  // namespace lisce
