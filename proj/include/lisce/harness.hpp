// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "lisce/channel.hpp"
#include "lisce/crlb.hpp"
#include "lisce/errors.hpp"
#include "lisce/estimators.hpp"
#include "lisce/random_stream.hpp"
#include "lisce/signal.hpp"

namespace lisce {

enum class Estimator { kLs, kDes };
enum class Component { kReH, kImH, kEta };

inline const char* to_string(Estimator e) { return e == Estimator::kLs ? "LS" : "DES"; }

inline const char* to_string(Component c) {
    switch (c) {
        case Component::kReH: return "re_h";
        case Component::kImH: return "im_h";
        default: return "eta";
    }
}

/// Full description of one Monte Carlo experiment.
struct ExperimentConfig {
    ChannelParams channel;
    std::size_t k1 = 1;
    std::size_t k2 = 1;
    std::vector<double> snr_db_list = {0.0, 2.0, 4.0, 6.0, 8.0};
    std::size_t trials = 10000;
    std::uint64_t master_seed = 42;
    DualAscentConfig dual_ascent;
    bool run_ls = true;
    bool run_des = true;

    void validate() const {
        channel.validate();
        dual_ascent.validate();
        if (k1 < 1 || k2 < 1) {
            throw invalid_parameter_error("ExperimentConfig: pilot lengths must be >= 1");
        }
        if (trials < 1) {
            throw invalid_parameter_error("ExperimentConfig: trials must be >= 1");
        }
        if (snr_db_list.empty()) {
            throw invalid_parameter_error("ExperimentConfig: snr_db_list must be nonempty");
        }
        if (!run_ls && !run_des) {
            throw invalid_parameter_error("ExperimentConfig: estimator set is empty");
        }
    }
};

/// One output row: (snr, estimator, component) -> MSE, with the matching
/// closed-form CRLB alongside.
struct MseRecord {
    double snr_db = 0.0;
    Estimator estimator = Estimator::kLs;
    Component component = Component::kReH;
    double mse = 0.0;
    double crlb = 0.0;
    std::size_t trials = 0;
    std::size_t nonconverged = 0;  // DES rows only; 0 for LS
};

/// Squared errors of one estimator on one trial, per real component.
struct ComponentErrors {
    std::array<double, 3> sq = {0.0, 0.0, 0.0};  // indexed by Component
};

/// Everything a single (trial, snr) evaluation produces.
struct TrialResult {
    ComponentErrors ls;
    ComponentErrors des;
    bool des_converged = true;
    bool des_recovered = false;
    bool eta_dominates = true;  // true channel satisfied eta > |h|
};

struct ExperimentDiagnostics {
    std::vector<std::size_t> nonconverged_per_snr;  // DES trials that hit t_max
    std::size_t eta_violations = 0;                 // sampled channels with eta <= |h|
    std::vector<std::string> warnings;
};

struct ExperimentResult {
    std::vector<MseRecord> records;
    ExperimentDiagnostics diagnostics;
};

namespace detail {

/// Substream layout: channel draws live on stream 2*trial, noise draws on
/// 2*trial + 1.  The unit-variance noise vector is drawn once per trial and
/// scaled per SNR point, so results do not depend on the SNR list order and
/// the LS-only and LS+DES runs consume identical randomness.
struct TrialInputs {
    ChannelRealization channel;
    std::vector<cplx> unit_noise;
};

inline TrialInputs draw_trial_inputs(const ExperimentConfig& config, std::size_t trial_index,
                                     std::size_t k_total) {
    RandomStream channel_rng(config.master_seed, 2 * static_cast<std::uint64_t>(trial_index));
    RandomStream noise_rng(config.master_seed, 2 * static_cast<std::uint64_t>(trial_index) + 1);
    TrialInputs in{sample_channel(config.channel, channel_rng), {}};
    in.unit_noise.resize(k_total);
    for (cplx& w : in.unit_noise) {
        w = sample_complex_gaussian(cplx(0.0, 0.0), 1.0, noise_rng);
    }
    return in;
}

inline ComponentErrors squared_errors(const ParameterVector& x, const ChannelRealization& ch) {
    ComponentErrors e;
    double dre = x.h_hat.real() - ch.h().real();
    double dim = x.h_hat.imag() - ch.h().imag();
    double deta = x.eta_hat.real() - ch.eta();
    e.sq = {dre * dre, dim * dim, deta * deta};
    return e;
}

inline TrialResult evaluate_trial(const ExperimentConfig& config, const DesignMatrix& design,
                                  const TrialInputs& in, double sigma_w2) {
    std::vector<cplx> y = design.apply({in.channel.h(), cplx(in.channel.eta(), 0.0)});
    double noise_scale = std::sqrt(sigma_w2);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += noise_scale * in.unit_noise[i];
    }

    TrialResult out;
    out.eta_dominates = in.channel.eta() > std::abs(in.channel.h());
    if (config.run_ls) {
        out.ls = squared_errors(ls_estimate(design, y), in.channel);
    }
    if (config.run_des) {
        EstimationResult des = des_estimate(design, y, config.dual_ascent);
        out.des = squared_errors(des.x_hat, in.channel);
        out.des_converged = des.converged;
        out.des_recovered = des.recovered;
    }
    return out;
}

}  // namespace detail

/// Evaluate one trial at one SNR.  Deterministic in (master_seed, trial_index,
/// snr_db); estimator failures surface as flags, never as exceptions.
inline TrialResult run_trial(const ExperimentConfig& config, double snr_db,
                             std::size_t trial_index) {
    config.validate();
    PilotFrame frame = default_pilots(config.k1, config.k2);
    DesignMatrix design = build_design_matrix(frame);
    double sigma_w2 = snr_to_noise_variance(snr_db, frame.mean_symbol_power());
    auto inputs = detail::draw_trial_inputs(config, trial_index, frame.k_total());
    return detail::evaluate_trial(config, design, inputs, sigma_w2);
}

/// Run the full experiment.  Trials fan out to `workers` threads (0 = one per
/// hardware thread); per-trial results land in preallocated slots and are
/// reduced in trial order, so the output is byte-identical for any worker
/// count.
inline ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers = 1) {
    config.validate();
    PilotFrame frame = default_pilots(config.k1, config.k2);
    DesignMatrix design = build_design_matrix(frame);
    const std::size_t n_snr = config.snr_db_list.size();
    const std::size_t n_trials = config.trials;

    std::vector<double> sigma_w2(n_snr);
    for (std::size_t s = 0; s < n_snr; ++s) {
        sigma_w2[s] = snr_to_noise_variance(config.snr_db_list[s], frame.mean_symbol_power());
    }

    // slot layout: trial-major, then snr
    std::vector<TrialResult> slots(n_trials * n_snr);
    std::vector<std::uint8_t> eta_flags(n_trials, 1);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            auto inputs = detail::draw_trial_inputs(config, t, frame.k_total());
            eta_flags[t] = inputs.channel.eta() > std::abs(inputs.channel.h()) ? 1 : 0;
            for (std::size_t s = 0; s < n_snr; ++s) {
                slots[t * n_snr + s] =
                    detail::evaluate_trial(config, design, inputs, sigma_w2[s]);
            }
        }
    };

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(1, n_trials)));
    if (workers <= 1) {
        work(0, n_trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        std::size_t chunk = (n_trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t begin = std::min<std::size_t>(w * chunk, n_trials);
            std::size_t end = std::min<std::size_t>(begin + chunk, n_trials);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    result.diagnostics.nonconverged_per_snr.assign(n_snr, 0);
    for (std::size_t t = 0; t < n_trials; ++t) {
        if (!eta_flags[t]) ++result.diagnostics.eta_violations;
    }

    for (std::size_t s = 0; s < n_snr; ++s) {
        std::array<double, 3> ls_sum = {0.0, 0.0, 0.0};
        std::array<double, 3> des_sum = {0.0, 0.0, 0.0};
        std::size_t nonconv = 0;
        for (std::size_t t = 0; t < n_trials; ++t) {
            const TrialResult& r = slots[t * n_snr + s];
            for (std::size_t c = 0; c < 3; ++c) {
                ls_sum[c] += r.ls.sq[c];
                des_sum[c] += r.des.sq[c];
            }
            if (config.run_des && !r.des_converged) ++nonconv;
        }
        result.diagnostics.nonconverged_per_snr[s] = nonconv;
        if (config.run_des && nonconv * 20 > n_trials) {  // > 5%
            result.diagnostics.warnings.push_back(
                "snr " + std::to_string(config.snr_db_list[s]) + " dB: " +
                std::to_string(nonconv) + " of " + std::to_string(n_trials) +
                " DES trials hit the iteration cap");
        }

        CrlbBundle bound = crlb_closed_form(frame.energy1(), frame.energy2(), sigma_w2[s]);
        std::array<double, 3> crlb = {bound.re_h_bound, bound.im_h_bound, bound.eta_bound};
        for (int est = 0; est < 2; ++est) {
            bool is_ls = est == 0;
            if ((is_ls && !config.run_ls) || (!is_ls && !config.run_des)) continue;
            const auto& sums = is_ls ? ls_sum : des_sum;
            for (std::size_t c = 0; c < 3; ++c) {
                MseRecord rec;
                rec.snr_db = config.snr_db_list[s];
                rec.estimator = is_ls ? Estimator::kLs : Estimator::kDes;
                rec.component = static_cast<Component>(c);
                rec.mse = sums[c] / static_cast<double>(n_trials);
                rec.crlb = crlb[c];
                rec.trials = n_trials;
                rec.nonconverged = is_ls ? 0 : nonconv;
                result.records.push_back(rec);
            }
        }
    }
    return result;
}

struct GainRecord {
    double snr_db = 0.0;
    Component component = Component::kReH;
    double gain_pct = 0.0;
};

/// Accuracy gain of DES over LS in percent: (MSE_LS - MSE_DES) / MSE_LS * 100.
inline std::vector<GainRecord> gains_table(const std::vector<MseRecord>& records) {
    std::vector<GainRecord> gains;
    for (const MseRecord& ls : records) {
        if (ls.estimator != Estimator::kLs) continue;
        bool found = false;
        for (const MseRecord& des : records) {
            if (des.estimator == Estimator::kDes && des.snr_db == ls.snr_db &&
                des.component == ls.component) {
                gains.push_back(
                    {ls.snr_db, ls.component, (ls.mse - des.mse) / ls.mse * 100.0});
                found = true;
                break;
            }
        }
        if (!found) {
            throw incomplete_data_error("gains_table: missing DES row for an LS row");
        }
    }
    if (gains.empty()) {
        throw incomplete_data_error("gains_table: no LS/DES pairs present");
    }
    return gains;
}

enum class DiffPair { kLsMinusDes, kDesMinusCrlb };

struct DiffRecord {
    double snr_db = 0.0;
    Component component = Component::kReH;
    double difference = 0.0;
};

/// Signed MSE differences, either MSE_LS - MSE_DES or MSE_DES - CRLB.
inline std::vector<DiffRecord> mse_difference(const std::vector<MseRecord>& records,
                                              DiffPair pair) {
    std::vector<DiffRecord> diffs;
    for (const MseRecord& rec : records) {
        if (rec.estimator != Estimator::kDes) continue;
        if (pair == DiffPair::kDesMinusCrlb) {
            diffs.push_back({rec.snr_db, rec.component, rec.mse - rec.crlb});
            continue;
        }
        bool found = false;
        for (const MseRecord& ls : records) {
            if (ls.estimator == Estimator::kLs && ls.snr_db == rec.snr_db &&
                ls.component == rec.component) {
                diffs.push_back({rec.snr_db, rec.component, ls.mse - rec.mse});
                found = true;
                break;
            }
        }
        if (!found) {
            throw incomplete_data_error("mse_difference: missing LS row for a DES row");
        }
    }
    if (diffs.empty()) {
        throw incomplete_data_error("mse_difference: no DES rows present");
    }
    return diffs;
}

/// Multiplier and iterate traces for one trial, for convergence plots.
struct ConvergenceTrace {
    std::vector<double> lambda_trace;
    std::vector<double> delta_trace;
    std::vector<ParameterVector> iterate_trace;
    bool converged = false;
    bool recovered = false;
};

inline ConvergenceTrace convergence_trace(const ExperimentConfig& config, double snr_db,
                                          std::size_t trial_index) {
    config.validate();
    if (!config.run_des) {
        throw invalid_parameter_error("convergence_trace: DES is not in the estimator set");
    }
    PilotFrame frame = default_pilots(config.k1, config.k2);
    DesignMatrix design = build_design_matrix(frame);
    double sigma_w2 = snr_to_noise_variance(snr_db, frame.mean_symbol_power());
    auto inputs = detail::draw_trial_inputs(config, trial_index, frame.k_total());
    std::vector<cplx> y = design.apply({inputs.channel.h(), cplx(inputs.channel.eta(), 0.0)});
    double noise_scale = std::sqrt(sigma_w2);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += noise_scale * inputs.unit_noise[i];
    }
    EstimationResult res = des_estimate(design, y, config.dual_ascent);
    return {res.lambda_trace, res.delta_trace, res.x_trace, res.converged, res.recovered};
}

/// First iteration after which every later step of `trace` moves less than
/// `tol`; 0 when the trace never moves that much.
inline std::size_t settling_iteration(const std::vector<double>& trace, double tol) {
    std::size_t settle = 0;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (std::abs(trace[i] - trace[i - 1]) >= tol) {
            settle = i;
        }
    }
    return settle;
}

}  // namespace lisce
