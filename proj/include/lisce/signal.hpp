// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

#include "lisce/channel.hpp"
#include "lisce/errors.hpp"
#include "lisce/linalg.hpp"
#include "lisce/random_stream.hpp"
#include "lisce/types.hpp"

namespace lisce {

/// Pilot symbols split into the unreflected (r=0) and reflected (r=1) slots.
/// Slot index sets are frame-layout metadata only; no math depends on them.
struct PilotFrame {
    std::vector<cplx> s_p1;
    std::vector<cplx> s_p2;
    std::set<std::size_t> slot_indices_1;
    std::set<std::size_t> slot_indices_2;

    std::size_t k1() const noexcept { return s_p1.size(); }
    std::size_t k2() const noexcept { return s_p2.size(); }
    std::size_t k_total() const noexcept { return s_p1.size() + s_p2.size(); }

    /// s_p1^H s_p1
    double energy1() const noexcept {
        double e = 0.0;
        for (cplx s : s_p1) e += std::norm(s);
        return e;
    }

    /// s_p2^H s_p2
    double energy2() const noexcept {
        double e = 0.0;
        for (cplx s : s_p2) e += std::norm(s);
        return e;
    }

    /// Mean per-symbol transmit power over the whole frame.
    double mean_symbol_power() const noexcept {
        return (energy1() + energy2()) / static_cast<double>(k_total());
    }

    void validate() const {
        if (s_p1.empty() || s_p2.empty()) {
            throw invalid_parameter_error("PilotFrame: need K1 >= 1 and K2 >= 1");
        }
        if (!(energy1() > 0.0) || !(energy2() > 0.0)) {
            throw invalid_parameter_error("PilotFrame: pilot energies must be positive");
        }
    }
};

/// All-ones unit-modulus pilots of the requested lengths.
inline PilotFrame default_pilots(std::size_t k1, std::size_t k2) {
    if (k1 < 1 || k2 < 1) {
        throw invalid_parameter_error("default_pilots: pilot lengths must be >= 1");
    }
    PilotFrame frame;
    frame.s_p1.assign(k1, cplx(1.0, 0.0));
    frame.s_p2.assign(k2, cplx(1.0, 0.0));
    return frame;
}

/// Stacked (K1+K2) x 2 pilot matrix: rows (s_p1[i], 0) then (s_p2[j], s_p2[j]).
struct DesignMatrix {
    std::vector<std::array<cplx, 2>> rows;

    std::size_t k_total() const noexcept { return rows.size(); }

    /// A^H A is real for this structure: [[a+b, b], [b, b]] with the pilot
    /// energies a = s_p1^H s_p1 and b = s_p2^H s_p2.
    std::array<double, 2> energies() const noexcept {
        double a_plus_b = 0.0, b = 0.0;
        for (const auto& row : rows) {
            a_plus_b += std::norm(row[0]);
            b += std::norm(row[1]);
        }
        return {a_plus_b - b, b};
    }

    /// A^H y
    Vec2c apply_adjoint(const std::vector<cplx>& y) const {
        if (y.size() != rows.size()) {
            throw dimension_error("DesignMatrix: observation length mismatch");
        }
        Vec2c r{cplx(0.0, 0.0), cplx(0.0, 0.0)};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            r[0] += std::conj(rows[i][0]) * y[i];
            r[1] += std::conj(rows[i][1]) * y[i];
        }
        return r;
    }

    /// A x
    std::vector<cplx> apply(const Vec2c& x) const {
        std::vector<cplx> out(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out[i] = rows[i][0] * x[0] + rows[i][1] * x[1];
        }
        return out;
    }
};

inline DesignMatrix build_design_matrix(const PilotFrame& frame) {
    frame.validate();
    DesignMatrix a;
    a.rows.reserve(frame.k_total());
    for (cplx s : frame.s_p1) a.rows.push_back({s, cplx(0.0, 0.0)});
    for (cplx s : frame.s_p2) a.rows.push_back({s, s});
    return a;
}

/// Stacked received pilot vector together with the noise variance it was
/// produced under, so estimators and bounds cannot be fed mismatched levels.
struct Observation {
    std::vector<cplx> y;
    double sigma_w2 = 0.0;
};

/// y = A [h, eta]^T + w with w ~ CN(0, sigma_w2 I); sigma_w2 = 0 is exact.
inline Observation synthesize_observation(const PilotFrame& frame,
                                          const ChannelRealization& channel, double sigma_w2,
                                          RandomStream& rng) {
    if (sigma_w2 < 0.0) {
        throw invalid_parameter_error("synthesize_observation: negative noise variance");
    }
    DesignMatrix a = build_design_matrix(frame);
    Vec2c x{channel.h(), cplx(channel.eta(), 0.0)};
    Observation obs;
    obs.sigma_w2 = sigma_w2;
    obs.y = a.apply(x);
    for (cplx& yi : obs.y) {
        yi = sample_complex_gaussian(yi, sigma_w2, rng);
    }
    return obs;
}

/// sigma_w2 = pilot_symbol_power / 10^(snr_db / 10)
inline double snr_to_noise_variance(double snr_db, double pilot_symbol_power) {
    if (!(pilot_symbol_power > 0.0)) {
        throw invalid_parameter_error("snr_to_noise_variance: power must be positive");
    }
    return pilot_symbol_power / std::pow(10.0, snr_db / 10.0);
}

}  // namespace lisce
