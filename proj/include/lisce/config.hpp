// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lisce/errors.hpp"
#include "lisce/harness.hpp"

namespace lisce {

// Flat `key = value` configuration text: one pair per line, `#` comments,
// comma-separated lists.  Unknown keys are rejected with their line number.

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
    bool consumed = false;
};

class KeyValueFile {
   public:
    KeyValueFile(std::istream& in, std::string source) : source_(std::move(source)) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::string text = trim(line);
            if (text.empty()) continue;
            std::size_t eq = text.find('=');
            if (eq == std::string::npos) {
                fail(line_no, "expected `key = value`");
            }
            std::string key = trim(text.substr(0, eq));
            std::string value = trim(text.substr(eq + 1));
            if (key.empty()) {
                fail(line_no, "empty key");
            }
            if (entries_.count(key)) {
                fail(line_no, "duplicate key `" + key + "`");
            }
            entries_[key] = {value, line_no, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string raw(const std::string& key) {
        auto it = entries_.find(key);
        it->second.consumed = true;
        return it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return parse_double(key);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        auto& e = entries_[key];
        e.consumed = true;
        try {
            std::size_t used = 0;
            std::uint64_t v = std::stoull(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(e.line, "`" + key + "` is not an unsigned integer: " + e.value);
        }
        return fallback;
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        auto& e = entries_[key];
        e.consumed = true;
        if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
        if (e.value == "false" || e.value == "0" || e.value == "no") return false;
        fail(e.line, "`" + key + "` is not a boolean: " + e.value);
        return fallback;
    }

    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        auto& e = entries_[key];
        e.consumed = true;
        std::vector<double> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) fail(e.line, "`" + key + "` has an empty list element");
            try {
                std::size_t used = 0;
                out.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail(e.line, "`" + key + "` has a non-numeric element: " + item);
            }
        }
        if (out.empty()) fail(e.line, "`" + key + "` is an empty list");
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key,
                                             std::vector<std::string> fallback) {
        if (!has(key)) return fallback;
        auto& e = entries_[key];
        e.consumed = true;
        std::vector<std::string> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : entries_) {
            if (!entry.consumed) {
                fail(entry.line, "unknown key `" + key + "`");
            }
        }
    }

    [[noreturn]] void fail(std::size_t line, const std::string& message) const {
        throw invalid_parameter_error(source_ + ":" + std::to_string(line) + ": " + message);
    }

   private:
    double parse_double(const std::string& key) {
        auto& e = entries_[key];
        e.consumed = true;
        try {
            std::size_t used = 0;
            double v = std::stod(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(e.line, "`" + key + "` is not a number: " + e.value);
        }
        return 0.0;
    }

    std::string source_;
    std::map<std::string, ConfigEntry> entries_;
};

}  // namespace detail

struct ParsedExperiment {
    ExperimentConfig config;
    std::vector<std::string> notices;
};

/// Parse an experiment configuration.  Missing keys fall back to the stock
/// defaults; a missing `trials` additionally produces a notice, since the
/// default of 10^4 dominates runtime.
inline ParsedExperiment parse_experiment_config(std::istream& in,
                                                const std::string& source_name) {
    detail::KeyValueFile kv(in, source_name);
    ParsedExperiment parsed;
    ExperimentConfig& cfg = parsed.config;

    cfg.channel.sigma_h2 = kv.get_double("sigma_h2", cfg.channel.sigma_h2);
    cfg.channel.sigma_f2 = kv.get_double("sigma_f2", cfg.channel.sigma_f2);
    cfg.channel.sigma_g2 = kv.get_double("sigma_g2", cfg.channel.sigma_g2);
    cfg.channel.n_elements =
        static_cast<std::size_t>(kv.get_u64("n_elements", cfg.channel.n_elements));
    cfg.k1 = static_cast<std::size_t>(kv.get_u64("k1", cfg.k1));
    cfg.k2 = static_cast<std::size_t>(kv.get_u64("k2", cfg.k2));
    cfg.snr_db_list = kv.get_double_list("snr_db_list", cfg.snr_db_list);
    if (!kv.has("trials")) {
        parsed.notices.push_back("trials not specified; defaulting to 10000");
    }
    cfg.trials = static_cast<std::size_t>(kv.get_u64("trials", cfg.trials));
    cfg.master_seed = kv.get_u64("master_seed", cfg.master_seed);

    cfg.dual_ascent.eps0 = kv.get_double("eps0", cfg.dual_ascent.eps0);
    cfg.dual_ascent.tau0 = kv.get_double("tau0", cfg.dual_ascent.tau0);
    cfg.dual_ascent.t_max =
        static_cast<std::size_t>(kv.get_u64("t_max", cfg.dual_ascent.t_max));
    cfg.dual_ascent.tol = kv.get_double("tol", cfg.dual_ascent.tol);
    cfg.dual_ascent.lambda0 = kv.get_double("lambda0", cfg.dual_ascent.lambda0);
    cfg.dual_ascent.delta0 = kv.get_double("delta0", cfg.dual_ascent.delta0);
    cfg.dual_ascent.feas_tol = kv.get_double("feas_tol", cfg.dual_ascent.feas_tol);
    cfg.dual_ascent.recover_on_failure =
        kv.get_bool("recover", cfg.dual_ascent.recover_on_failure);
    if (kv.has("step_schedule")) {
        std::string schedule = kv.raw("step_schedule");
        if (schedule == "diminishing") {
            cfg.dual_ascent.schedule = StepSchedule::kDiminishing;
        } else if (schedule == "constant") {
            cfg.dual_ascent.schedule = StepSchedule::kConstant;
        } else {
            throw invalid_parameter_error(
                source_name + ": step_schedule must be `constant` or `diminishing`, got `" +
                schedule + "`");
        }
    }

    std::vector<std::string> estimators = kv.get_string_list("estimators", {"LS", "DES"});
    cfg.run_ls = false;
    cfg.run_des = false;
    for (const std::string& e : estimators) {
        if (e == "LS") {
            cfg.run_ls = true;
        } else if (e == "DES") {
            cfg.run_des = true;
        } else {
            throw invalid_parameter_error(source_name + ": unknown estimator `" + e + "`");
        }
    }

    kv.reject_unknown();
    cfg.validate();
    return parsed;
}

}  // namespace lisce
