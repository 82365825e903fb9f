// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: `simulate`, `crlb`, `gains`, `trace`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lisce/cli.hpp"
#include "lisce/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo channel-estimation experiments for surface-assisted links"};
    app.set_version_flag("--version", std::string("lisce ") + lisce::kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "experiment config file (key = value lines)");
    app.add_option("--out", out_path, "output path");
    app.add_option("--seed", seed, "override the master seed");

    auto* simulate = app.add_subcommand("simulate", "run the MSE-versus-SNR experiment");
    unsigned workers = 1;
    simulate->add_option("--workers", workers,
                         "worker threads (0 = one per hardware thread)");

    auto* crlb = app.add_subcommand("crlb", "emit the variance lower bounds");
    std::size_t k1 = 1, k2 = 1;
    std::vector<double> snr_list;
    crlb->add_option("--k1", k1, "unreflected pilot count");
    crlb->add_option("--k2", k2, "reflected pilot count");
    crlb->add_option("--snr", snr_list, "SNR grid in dB (comma separated)")
        ->delimiter(',')
        ->required();

    auto* gains = app.add_subcommand("gains", "DES-over-LS gain table from a results csv");
    std::string results_csv;
    gains->add_option("results", results_csv, "simulate output csv")->required();

    auto* trace = app.add_subcommand("trace", "multiplier trace for one trial");
    double trace_snr = 0.0;
    std::size_t trial_index = 0;
    trace->add_option("--snr", trace_snr, "SNR point in dB")->required();
    trace->add_option("--trial", trial_index, "trial index");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        if (out_path.empty()) {
            std::cerr << "usage error: simulate requires --out\n";
            return lisce::cli::kExitUsage;
        }
        return lisce::cli::cmd_simulate({config_path, out_path, seed, workers});
    }
    if (crlb->parsed()) {
        return lisce::cli::cmd_crlb({k1, k2, snr_list, out_path});
    }
    if (gains->parsed()) {
        return lisce::cli::cmd_gains({results_csv, out_path});
    }
    if (trace->parsed()) {
        if (out_path.empty()) {
            std::cerr << "usage error: trace requires --out\n";
            return lisce::cli::kExitUsage;
        }
        return lisce::cli::cmd_trace({config_path, trace_snr, trial_index, out_path, seed});
    }
    return lisce::cli::kExitUsage;
}
