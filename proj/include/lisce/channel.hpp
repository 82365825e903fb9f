// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "lisce/errors.hpp"
#include "lisce/random_stream.hpp"
#include "lisce/types.hpp"

namespace lisce {

/// Variances of the direct/surface fading channels and the element count N.
struct ChannelParams {
    double sigma_h2 = 1.0 / 64.0;
    double sigma_f2 = 1.0 / 25.0;
    double sigma_g2 = 1.0 / 9.0;
    std::size_t n_elements = 32;

    void validate() const {
        if (sigma_h2 < 0.0 || sigma_f2 < 0.0 || sigma_g2 < 0.0) {
            throw invalid_parameter_error("ChannelParams: variances must be nonnegative");
        }
        if (n_elements < 1) {
            throw invalid_parameter_error("ChannelParams: n_elements must be >= 1");
        }
    }
};

/// Inner product of the two amplitude vectors (the assistant channel).
inline double assistant_channel(const std::vector<double>& f_amp,
                                const std::vector<double>& g_amp) {
    if (f_amp.size() != g_amp.size()) {
        throw dimension_error("assistant_channel: amplitude vectors differ in length");
    }
    double eta = 0.0;
    for (std::size_t n = 0; n < f_amp.size(); ++n) {
        if (f_amp[n] < 0.0 || g_amp[n] < 0.0) {
            throw invalid_parameter_error("assistant_channel: amplitudes must be >= 0");
        }
        eta += f_amp[n] * g_amp[n];
    }
    return eta;
}

/// One draw of the direct channel h, the surface amplitude vectors and eta.
/// The constructor recomputes eta from the vectors and rejects a stored value
/// that disagrees beyond 1e-12, so the defining identity stays testable.
class ChannelRealization {
   public:
    ChannelRealization(cplx h, std::vector<double> f_amp, std::vector<double> g_amp, double eta)
        : h_(h), f_amp_(std::move(f_amp)), g_amp_(std::move(g_amp)), eta_(eta) {
        double recomputed = assistant_channel(f_amp_, g_amp_);
        double scale = std::max(1.0, std::abs(recomputed));
        if (std::abs(recomputed - eta_) > 1e-12 * scale) {
            throw invalid_parameter_error(
                "ChannelRealization: stored eta disagrees with amplitude vectors");
        }
    }

    cplx h() const noexcept { return h_; }
    const std::vector<double>& f_amp() const noexcept { return f_amp_; }
    const std::vector<double>& g_amp() const noexcept { return g_amp_; }
    double eta() const noexcept { return eta_; }

   private:
    cplx h_;
    std::vector<double> f_amp_;
    std::vector<double> g_amp_;
    double eta_;
};

/// Draw h ~ CN(0, sigma_h2) and Rayleigh amplitudes |CN(0, sigma_f2)|,
/// |CN(0, sigma_g2)| per element.  Draw order is pinned (h, then f, then g)
/// so results are bit-reproducible for a given stream.
inline ChannelRealization sample_channel(const ChannelParams& params, RandomStream& rng) {
    params.validate();
    cplx h = sample_complex_gaussian(cplx(0.0, 0.0), params.sigma_h2, rng);
    std::vector<double> f_amp(params.n_elements);
    std::vector<double> g_amp(params.n_elements);
    for (std::size_t n = 0; n < params.n_elements; ++n) {
        f_amp[n] = std::abs(sample_complex_gaussian(cplx(0.0, 0.0), params.sigma_f2, rng));
    }
    for (std::size_t n = 0; n < params.n_elements; ++n) {
        g_amp[n] = std::abs(sample_complex_gaussian(cplx(0.0, 0.0), params.sigma_g2, rng));
    }
    double eta = assistant_channel(f_amp, g_amp);
    return ChannelRealization(h, std::move(f_amp), std::move(g_amp), eta);
}

}  // namespace lisce
