// SPDX-License-Identifier: Apache-2.0
//
// Small end-to-end run: stock configuration at a reduced trial count,
// printed as an aligned MSE table plus the gain summary.

#include <iomanip>
#include <iostream>

#include "lisce/csv.hpp"
#include "lisce/harness.hpp"

int main() {
    lisce::ExperimentConfig config;
    config.trials = 2000;

    lisce::ExperimentResult result = lisce::run_experiment(config, 0);

    std::cout << "snr_db  estimator  component        mse       crlb\n";
    for (const lisce::MseRecord& r : result.records) {
        std::cout << std::setw(6) << r.snr_db << "  " << std::setw(9)
                  << lisce::to_string(r.estimator) << "  " << std::setw(9)
                  << lisce::to_string(r.component) << "  " << std::setw(9) << std::fixed
                  << std::setprecision(5) << r.mse << "  " << std::setw(9) << r.crlb << "\n";
    }
    std::cout << "\n";
    lisce::render_gains_table(std::cout, lisce::gains_table(result.records));
    return 0;
}
