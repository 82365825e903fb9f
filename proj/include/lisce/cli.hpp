// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lisce/config.hpp"
#include "lisce/csv.hpp"
#include "lisce/errors.hpp"
#include "lisce/harness.hpp"

namespace lisce::cli {

// Exit-code contract: 0 success, 1 usage/config error, 2 runtime/data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

namespace detail {

/// Write through a temp file and rename, so a failed run leaves no partial
/// output behind.
inline void write_file_atomically(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open output file: " + tmp);
        }
        out << contents;
        if (!out.good()) {
            out.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move output into place: " + path);
    }
}

inline ParsedExperiment load_config(const std::string& path,
                                    std::optional<std::uint64_t> seed_override) {
    ParsedExperiment parsed;
    if (path.empty()) {
        std::istringstream empty;
        parsed = parse_experiment_config(empty, "<defaults>");
    } else {
        std::ifstream in(path);
        if (!in) {
            throw invalid_parameter_error("cannot read config file: " + path);
        }
        parsed = parse_experiment_config(in, path);
    }
    if (seed_override) {
        parsed.config.master_seed = *seed_override;
    }
    return parsed;
}

}  // namespace detail

struct SimulateArgs {
    std::string config_path;  // empty = stock defaults
    std::string out_path;
    std::optional<std::uint64_t> seed_override;
    unsigned workers = 1;
};

inline int cmd_simulate(const SimulateArgs& args, std::ostream& log = std::cerr) {
    ParsedExperiment parsed;
    try {
        parsed = detail::load_config(args.config_path, args.seed_override);
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (const std::string& notice : parsed.notices) {
        log << "notice: " << notice << "\n";
    }
    try {
        ExperimentResult result = run_experiment(parsed.config, args.workers);
        for (const std::string& warning : result.diagnostics.warnings) {
            log << "warning: " << warning << "\n";
        }
        std::ostringstream body;
        write_mse_csv(body, parsed.config, result.records);
        detail::write_file_atomically(args.out_path, body.str());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct CrlbArgs {
    std::size_t k1 = 1;
    std::size_t k2 = 1;
    std::vector<double> snr_db_list;
    std::string out_path;  // empty = stdout
};

inline int cmd_crlb(const CrlbArgs& args, std::ostream& out = std::cout,
                    std::ostream& log = std::cerr) {
    if (args.k1 < 1 || args.k2 < 1 || args.snr_db_list.empty()) {
        log << "usage error: crlb needs k1 >= 1, k2 >= 1 and a nonempty SNR list\n";
        return kExitUsage;
    }
    try {
        std::ostringstream body;
        write_crlb_csv(body, args.k1, args.k2, args.snr_db_list);
        if (args.out_path.empty()) {
            out << body.str();
        } else {
            detail::write_file_atomically(args.out_path, body.str());
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct GainsArgs {
    std::string results_csv;
    std::string out_path;  // optional CSV destination
};

inline int cmd_gains(const GainsArgs& args, std::ostream& out = std::cout,
                     std::ostream& log = std::cerr) {
    std::ifstream in(args.results_csv);
    if (!in) {
        log << "usage error: cannot read results csv: " << args.results_csv << "\n";
        return kExitUsage;
    }
    try {
        std::vector<MseRecord> records = read_mse_csv(in);
        std::vector<GainRecord> gains = gains_table(records);
        render_gains_table(out, gains);
        if (!args.out_path.empty()) {
            std::ostringstream body;
            write_gains_csv(body, gains);
            detail::write_file_atomically(args.out_path, body.str());
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct TraceArgs {
    std::string config_path;
    double snr_db = 0.0;
    std::size_t trial_index = 0;
    std::string out_path;
    std::optional<std::uint64_t> seed_override;
};

inline int cmd_trace(const TraceArgs& args, std::ostream& log = std::cerr) {
    ParsedExperiment parsed;
    try {
        parsed = detail::load_config(args.config_path, args.seed_override);
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        ConvergenceTrace trace =
            convergence_trace(parsed.config, args.snr_db, args.trial_index);
        std::ostringstream body;
        write_trace_csv(body, parsed.config, args.snr_db, args.trial_index, trace);
        detail::write_file_atomically(args.out_path, body.str());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace lisce::cli
