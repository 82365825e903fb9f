// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <ctime>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lisce/errors.hpp"
#include "lisce/harness.hpp"
#include "lisce/version.hpp"

namespace lisce {

/// 17 significant digits: enough for a lossless double round-trip.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Leading `#` comment block carrying everything needed to reproduce a run.
/// The timestamp is informational; reproducibility rests on the config lines.
inline void write_manifest(std::ostream& out, const std::string& command,
                           const ExperimentConfig& cfg) {
    out << "# lisce " << command << " v" << kVersion << "\n";
    std::time_t now = std::time(nullptr);
    char stamp[32];
    if (std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now))) {
        out << "# generated: " << stamp << "\n";
    }
    out << "# sigma_h2 = " << fmt17(cfg.channel.sigma_h2) << "\n";
    out << "# sigma_f2 = " << fmt17(cfg.channel.sigma_f2) << "\n";
    out << "# sigma_g2 = " << fmt17(cfg.channel.sigma_g2) << "\n";
    out << "# n_elements = " << cfg.channel.n_elements << "\n";
    out << "# k1 = " << cfg.k1 << "\n";
    out << "# k2 = " << cfg.k2 << "\n";
    out << "# snr_db_list = ";
    for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i) {
        out << (i ? "," : "") << fmt17(cfg.snr_db_list[i]);
    }
    out << "\n";
    out << "# trials = " << cfg.trials << "\n";
    out << "# master_seed = " << cfg.master_seed << "\n";
    out << "# estimators = " << (cfg.run_ls ? "LS" : "") << (cfg.run_ls && cfg.run_des ? "," : "")
        << (cfg.run_des ? "DES" : "") << "\n";
    out << "# eps0 = " << fmt17(cfg.dual_ascent.eps0) << "\n";
    out << "# tau0 = " << fmt17(cfg.dual_ascent.tau0) << "\n";
    out << "# t_max = " << cfg.dual_ascent.t_max << "\n";
    out << "# tol = " << fmt17(cfg.dual_ascent.tol) << "\n";
    out << "# lambda0 = " << fmt17(cfg.dual_ascent.lambda0) << "\n";
    out << "# delta0 = " << fmt17(cfg.dual_ascent.delta0) << "\n";
    out << "# feas_tol = " << fmt17(cfg.dual_ascent.feas_tol) << "\n";
    out << "# step_schedule = "
        << (cfg.dual_ascent.schedule == StepSchedule::kDiminishing ? "diminishing" : "constant")
        << "\n";
    out << "# recover = " << (cfg.dual_ascent.recover_on_failure ? "true" : "false") << "\n";
}

inline void write_mse_csv(std::ostream& out, const ExperimentConfig& cfg,
                          const std::vector<MseRecord>& records) {
    write_manifest(out, "simulate", cfg);
    out << "snr_db,estimator,component,mse,crlb,trials,nonconverged,seed\n";
    for (const MseRecord& r : records) {
        out << fmt17(r.snr_db) << ',' << to_string(r.estimator) << ',' << to_string(r.component)
            << ',' << fmt17(r.mse) << ',' << fmt17(r.crlb) << ',' << r.trials << ','
            << r.nonconverged << ',' << cfg.master_seed << "\n";
    }
}

/// Parse a simulate CSV back into records (manifest lines are skipped).
inline std::vector<MseRecord> read_mse_csv(std::istream& in) {
    std::vector<MseRecord> records;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("snr_db,", 0) != 0) {
                throw incomplete_data_error("results csv: missing header at line " +
                                            std::to_string(line_no));
            }
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) {
            throw incomplete_data_error("results csv: malformed row at line " +
                                        std::to_string(line_no));
        }
        MseRecord r;
        try {
            r.snr_db = std::stod(fields[0]);
            if (fields[1] == "LS") {
                r.estimator = Estimator::kLs;
            } else if (fields[1] == "DES") {
                r.estimator = Estimator::kDes;
            } else {
                throw std::invalid_argument("estimator");
            }
            if (fields[2] == "re_h") {
                r.component = Component::kReH;
            } else if (fields[2] == "im_h") {
                r.component = Component::kImH;
            } else if (fields[2] == "eta") {
                r.component = Component::kEta;
            } else {
                throw std::invalid_argument("component");
            }
            r.mse = std::stod(fields[3]);
            r.crlb = std::stod(fields[4]);
            r.trials = std::stoul(fields[5]);
            r.nonconverged = std::stoul(fields[6]);
        } catch (const std::exception&) {
            throw incomplete_data_error("results csv: unparsable row at line " +
                                        std::to_string(line_no));
        }
        records.push_back(r);
    }
    if (!header_seen) {
        throw incomplete_data_error("results csv: empty input");
    }
    return records;
}

inline void write_gains_csv(std::ostream& out, const std::vector<GainRecord>& gains) {
    out << "snr_db,component,gain_pct\n";
    for (const GainRecord& g : gains) {
        out << fmt17(g.snr_db) << ',' << to_string(g.component) << ',' << fmt17(g.gain_pct)
            << "\n";
    }
}

/// Aligned text table: one row per component, one column per SNR.
inline void render_gains_table(std::ostream& out, const std::vector<GainRecord>& gains) {
    std::vector<double> snrs;
    for (const GainRecord& g : gains) {
        bool seen = false;
        for (double s : snrs) seen |= s == g.snr_db;
        if (!seen) snrs.push_back(g.snr_db);
    }
    out << "DES-over-LS accuracy gains (%)\n";
    out << std::left << std::setw(10) << "SNR(dB)";
    for (double s : snrs) {
        std::ostringstream col;
        col << s;
        out << std::right << std::setw(10) << col.str();
    }
    out << "\n";
    const Component comps[] = {Component::kReH, Component::kImH, Component::kEta};
    for (Component c : comps) {
        out << std::left << std::setw(10) << to_string(c);
        for (double s : snrs) {
            bool found = false;
            for (const GainRecord& g : gains) {
                if (g.component == c && g.snr_db == s) {
                    std::ostringstream cell;
                    cell << std::fixed << std::setprecision(2) << g.gain_pct;
                    out << std::right << std::setw(10) << cell.str();
                    found = true;
                    break;
                }
            }
            if (!found) out << std::right << std::setw(10) << "-";
        }
        out << "\n";
    }
}

inline void write_crlb_csv(std::ostream& out, std::size_t k1, std::size_t k2,
                           const std::vector<double>& snr_db_list) {
    PilotFrame frame = default_pilots(k1, k2);
    out << "# lisce crlb v" << kVersion << "\n";
    out << "# k1 = " << k1 << "\n";
    out << "# k2 = " << k2 << "\n";
    out << "snr_db,component,crlb\n";
    for (double snr : snr_db_list) {
        double sigma_w2 = snr_to_noise_variance(snr, frame.mean_symbol_power());
        CrlbBundle b = crlb_for_frame(frame, sigma_w2);
        out << fmt17(snr) << ",re_h," << fmt17(b.re_h_bound) << "\n";
        out << fmt17(snr) << ",im_h," << fmt17(b.im_h_bound) << "\n";
        out << fmt17(snr) << ",eta," << fmt17(b.eta_bound) << "\n";
    }
}

inline void write_trace_csv(std::ostream& out, const ExperimentConfig& cfg, double snr_db,
                            std::size_t trial_index, const ConvergenceTrace& trace) {
    write_manifest(out, "trace", cfg);
    out << "# snr_db = " << fmt17(snr_db) << "\n";
    out << "# trial_index = " << trial_index << "\n";
    out << "iteration,lambda,delta,re_h_hat,im_h_hat,re_eta_hat,im_eta_hat\n";
    for (std::size_t i = 0; i < trace.lambda_trace.size(); ++i) {
        const ParameterVector& x = trace.iterate_trace[i];
        out << i << ',' << fmt17(trace.lambda_trace[i]) << ',' << fmt17(trace.delta_trace[i])
            << ',' << fmt17(x.h_hat.real()) << ',' << fmt17(x.h_hat.imag()) << ','
            << fmt17(x.eta_hat.real()) << ',' << fmt17(x.eta_hat.imag()) << "\n";
    }
}

}  // namespace lisce
