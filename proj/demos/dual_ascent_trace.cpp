// SPDX-License-Identifier: Apache-2.0
//
// Prints the multiplier trajectory of one constraint-active trial, the data
// behind the convergence plots.

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "lisce/harness.hpp"

int main(int argc, char** argv) {
    lisce::ExperimentConfig config;
    // trial 23 has both constraints active under the stock seed
    std::size_t trial = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 23;

    lisce::ConvergenceTrace trace = lisce::convergence_trace(config, 0.0, trial);
    std::cout << "trial " << trial << " at 0 dB, converged=" << trace.converged << "\n";
    std::cout << "iter     lambda      delta       |h_hat|    Re(eta_hat)\n";
    for (std::size_t i = 0; i < trace.lambda_trace.size(); ++i) {
        std::cout << std::setw(4) << i << "  " << std::setw(9) << std::fixed
                  << std::setprecision(5) << trace.lambda_trace[i] << "  " << std::setw(9)
                  << trace.delta_trace[i] << "  " << std::setw(9)
                  << std::abs(trace.iterate_trace[i].h_hat) << "  " << std::setw(9)
                  << trace.iterate_trace[i].eta_hat.real() << "\n";
    }
    return 0;
}
