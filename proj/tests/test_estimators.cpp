// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lisce/estimators.hpp"
#include "lisce/random_stream.hpp"
#include "support/grid_oracle.hpp"

using lisce::cplx;
using lisce::DesignMatrix;
using lisce::DualAscentConfig;
using lisce::EstimationResult;
using lisce::ParameterVector;
using lisce::RandomStream;

namespace {

DesignMatrix stock_design() {
    return lisce::build_design_matrix(lisce::default_pilots(1, 1));
}

std::vector<cplx> real_obs(double y0, double y1) { return {cplx(y0, 0), cplx(y1, 0)}; }

}  // namespace

TEST_CASE("LS recovers a noiseless observation exactly") {
    ParameterVector x = lisce::ls_estimate(stock_design(), real_obs(1, 3));
    REQUIRE(std::abs(x.h_hat - cplx(1, 0)) < 1e-14);
    REQUIRE(std::abs(x.eta_hat - cplx(2, 0)) < 1e-14);
}

TEST_CASE("LS on a complex observation") {
    ParameterVector x = lisce::ls_estimate(stock_design(), {cplx(1, 1), cplx(2, 0)});
    REQUIRE(std::abs(x.h_hat - cplx(1, 1)) < 1e-14);
    REQUIRE(std::abs(x.eta_hat - cplx(1, -1)) < 1e-14);
}

TEST_CASE("LS of the zero observation is zero") {
    ParameterVector x = lisce::ls_estimate(stock_design(), real_obs(0, 0));
    REQUIRE(x.h_hat == cplx(0, 0));
    REQUIRE(x.eta_hat == cplx(0, 0));
}

TEST_CASE("LS normal-equation residual vanishes") {
    DesignMatrix a = lisce::build_design_matrix(lisce::default_pilots(2, 3));
    RandomStream rng(3, 0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<cplx> y;
        for (int i = 0; i < 5; ++i) {
            y.push_back(cplx(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1));
        }
        ParameterVector x = lisce::ls_estimate(a, y);
        std::vector<cplx> fitted = a.apply({x.h_hat, x.eta_hat});
        for (std::size_t i = 0; i < y.size(); ++i) fitted[i] = y[i] - fitted[i];
        lisce::Vec2c grad = a.apply_adjoint(fitted);
        REQUIRE(std::abs(grad[0]) < 1e-10);
        REQUIRE(std::abs(grad[1]) < 1e-10);
    }
}

TEST_CASE("constraint readings") {
    auto v1 = lisce::constraint_violation({cplx(1, 0), cplx(2, 0)});
    REQUIRE(v1.c1 == Catch::Approx(-2.0));
    REQUIRE(v1.c2 == Catch::Approx(-3.0));
    auto v2 = lisce::constraint_violation({cplx(2, 0), cplx(1, 0)});
    REQUIRE(v2.c1 == Catch::Approx(-1.0));
    REQUIRE(v2.c2 == Catch::Approx(3.0));
    auto v3 = lisce::constraint_violation({cplx(0, 0), cplx(0, 0)});
    REQUIRE(v3.c1 == 0.0);
    REQUIRE(v3.c2 == 0.0);
}

TEST_CASE("a strictly feasible LS point is returned untouched with zero multipliers") {
    EstimationResult res = lisce::des_estimate(stock_design(), real_obs(0.1, 2.1), {});
    REQUIRE(res.converged);
    REQUIRE_FALSE(res.recovered);
    REQUIRE(std::abs(res.x_hat.h_hat - cplx(0.1, 0)) < 1e-12);
    REQUIRE(std::abs(res.x_hat.eta_hat - cplx(2.0, 0)) < 1e-12);
    for (double l : res.lambda_trace) REQUIRE(l == 0.0);
    for (double d : res.delta_trace) REQUIRE(d == 0.0);
}

TEST_CASE("a strongly infeasible instance lands on the cone boundary") {
    // Unique constrained minimizer (0.8, 0.8); its dominance multiplier lies
    // outside the positive-definite interval, so the ascent loop cannot
    // settle and the boundary refit supplies the estimate.
    EstimationResult res = lisce::des_estimate(stock_design(), real_obs(2, 1), {});
    REQUIRE_FALSE(res.converged);
    REQUIRE(res.recovered);
    REQUIRE(std::abs(res.x_hat.h_hat - cplx(0.8, 0)) < 1e-6);
    REQUIRE(std::abs(res.x_hat.eta_hat - cplx(0.8, 0)) < 1e-6);
    auto oracle = lisce_test::grid_constrained_min(2, 1);
    REQUIRE(std::abs(res.x_hat.h_hat.real() - oracle.h) < 1e-2);
    REQUIRE(std::abs(res.x_hat.eta_hat.real() - oracle.eta) < 1e-2);
}

TEST_CASE("the zero observation is a feasible boundary minimizer") {
    EstimationResult res = lisce::des_estimate(stock_design(), real_obs(0, 0), {});
    REQUIRE(res.converged);
    REQUIRE(res.x_hat.h_hat == cplx(0, 0));
    REQUIRE(res.x_hat.eta_hat == cplx(0, 0));
}

TEST_CASE("traces include the initial multipliers") {
    EstimationResult res = lisce::des_estimate(stock_design(), real_obs(0.3, 1.1), {});
    REQUIRE(res.lambda_trace.size() == res.iterations + 1);
    REQUIRE(res.delta_trace.size() == res.iterations + 1);
    REQUIRE(res.x_trace.size() == res.iterations + 1);
    REQUIRE(res.lambda_trace[0] == 0.0);
    REQUIRE(res.delta_trace[0] == 0.0);
}

TEST_CASE("zero stepsizes reproduce LS exactly") {
    DualAscentConfig cfg;
    cfg.eps0 = 0.0;
    cfg.tau0 = 0.0;
    cfg.recover_on_failure = false;
    RandomStream rng(29, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> y = {cplx(4 * rng.uniform01() - 2, 4 * rng.uniform01() - 2),
                               cplx(4 * rng.uniform01() - 2, 4 * rng.uniform01() - 2)};
        ParameterVector ls = lisce::ls_estimate(stock_design(), y);
        EstimationResult des = lisce::des_estimate(stock_design(), y, cfg);
        REQUIRE(des.x_hat.h_hat == ls.h_hat);
        REQUIRE(des.x_hat.eta_hat == ls.eta_hat);
    }
}

TEST_CASE("feasible LS points keep both multipliers at zero") {
    RandomStream rng(31, 0);
    int checked = 0;
    while (checked < 25) {
        std::vector<cplx> y = {cplx(2 * rng.uniform01() - 1, 0),
                               cplx(4 * rng.uniform01() - 2, 0)};
        ParameterVector ls = lisce::ls_estimate(stock_design(), y);
        auto v = lisce::constraint_violation(ls);
        if (v.c1 >= -1e-3 || v.c2 >= -1e-3) continue;  // want strict feasibility
        EstimationResult des = lisce::des_estimate(stock_design(), y, {});
        REQUIRE(des.converged);
        for (double l : des.lambda_trace) REQUIRE(l == 0.0);
        for (double d : des.delta_trace) REQUIRE(d == 0.0);
        REQUIRE(std::abs(des.x_hat.h_hat - ls.h_hat) < 1e-12);
        ++checked;
    }
}

TEST_CASE("every iterate solves the shifted normal equations exactly") {
    DesignMatrix a = stock_design();
    RandomStream rng(37, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> y = {cplx(3 * rng.uniform01() - 1.5, 3 * rng.uniform01() - 1.5),
                               cplx(3 * rng.uniform01() - 1.5, 3 * rng.uniform01() - 1.5)};
        EstimationResult res = lisce::des_estimate(a, y, {});
        auto ne = lisce::detail::NormalEquations::from(a, y);
        for (std::size_t t = 1; t < res.x_trace.size(); ++t) {
            double lambda = res.lambda_trace[t - 1];
            double delta = res.delta_trace[t - 1];
            lisce::Mat2c m = ne.shifted_gram(delta);
            cplx r0 = m[0][0] * res.x_trace[t].h_hat + m[0][1] * res.x_trace[t].eta_hat -
                      ne.rhs[0];
            cplx r1 = m[1][0] * res.x_trace[t].h_hat + m[1][1] * res.x_trace[t].eta_hat -
                      (ne.rhs[1] + cplx(lambda, 0));
            REQUIRE(std::abs(r0) <= 1e-10);
            REQUIRE(std::abs(r1) <= 1e-10);
        }
    }
}

TEST_CASE("KKT residuals of a stationary LS point vanish") {
    EstimationResult res = lisce::des_estimate(stock_design(), real_obs(0.1, 2.1), {});
    auto kkt = lisce::kkt_residuals(stock_design(), real_obs(0.1, 2.1), res);
    REQUIRE(kkt.stationarity < 1e-12);
    REQUIRE(kkt.comp_slack_1 == 0.0);
    REQUIRE(kkt.comp_slack_2 == 0.0);
}

TEST_CASE("KKT residuals of a converged active-constraint run stay small") {
    // Mild dominance violation: LS = (0.5, 0.4), constrained optimum nearby.
    std::vector<cplx> y = real_obs(0.5, 0.9);
    EstimationResult res = lisce::des_estimate(stock_design(), y, {});
    REQUIRE(res.converged);
    REQUIRE(res.delta_trace.back() > 0.0);
    auto kkt = lisce::kkt_residuals(stock_design(), y, res);
    DualAscentConfig cfg;
    REQUIRE(kkt.stationarity <= 10 * cfg.tol);
    REQUIRE(kkt.comp_slack_1 <= 10 * cfg.tol);
    REQUIRE(kkt.comp_slack_2 <= 10 * cfg.tol);
}

TEST_CASE("KKT residuals of an arbitrary non-stationary point") {
    EstimationResult fake;
    fake.x_hat = {cplx(0, 0), cplx(0, 0)};
    fake.lambda_trace = {0.0};
    fake.delta_trace = {0.0};
    auto kkt = lisce::kkt_residuals(stock_design(), real_obs(1, 3), fake);
    REQUIRE(kkt.stationarity == Catch::Approx(4.0));
}

TEST_CASE("scaling the instance and the stepsizes leaves the iterates unchanged") {
    // (y, A) -> (c y, c A) with stepsizes scaled by c^2 reproduces the same
    // iterate sequence while the multipliers scale by c^2.
    double c = 3.0;
    std::vector<cplx> y = real_obs(2, 1);
    lisce::PilotFrame scaled;
    scaled.s_p1 = {cplx(c, 0)};
    scaled.s_p2 = {cplx(c, 0)};
    DesignMatrix a_scaled = lisce::build_design_matrix(scaled);
    std::vector<cplx> y_scaled = {c * y[0], c * y[1]};

    DualAscentConfig base;
    base.recover_on_failure = false;
    DualAscentConfig boosted = base;
    boosted.eps0 = base.eps0 * c * c;
    boosted.tau0 = base.tau0 * c * c;

    EstimationResult r1 = lisce::des_estimate(stock_design(), y, base);
    EstimationResult r2 = lisce::des_estimate(a_scaled, y_scaled, boosted);
    REQUIRE(r1.iterations == r2.iterations);
    for (std::size_t t = 0; t < r1.x_trace.size(); ++t) {
        REQUIRE(std::abs(r1.x_trace[t].h_hat - r2.x_trace[t].h_hat) < 1e-6);
        REQUIRE(std::abs(r1.x_trace[t].eta_hat - r2.x_trace[t].eta_hat) < 1e-6);
    }
    for (std::size_t t = 0; t < r1.lambda_trace.size(); ++t) {
        REQUIRE(r2.lambda_trace[t] == Catch::Approx(c * c * r1.lambda_trace[t]).margin(1e-6));
    }
    ParameterVector l1 = lisce::ls_estimate(stock_design(), y);
    ParameterVector l2 = lisce::ls_estimate(a_scaled, y_scaled);
    REQUIRE(std::abs(l1.h_hat - l2.h_hat) < 1e-12);
    REQUIRE(std::abs(l1.eta_hat - l2.eta_hat) < 1e-12);
}

TEST_CASE("converged runs match the grid oracle on random real instances") {
    RandomStream rng(41, 0);
    int converged = 0, recovered = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto [z0, z1] = rng.normal_pair();
        double y0 = 1.5 * z0, y1 = 1.5 * z1;
        EstimationResult res = lisce::des_estimate(stock_design(), real_obs(y0, y1), {});
        auto oracle = lisce_test::grid_constrained_min(y0, y1);
        if (res.converged || res.recovered) {
            REQUIRE(std::abs(res.x_hat.h_hat.real() - oracle.h) < 1e-2);
            REQUIRE(std::abs(res.x_hat.eta_hat.real() - oracle.eta) < 1e-2);
            REQUIRE(std::abs(res.x_hat.h_hat.imag()) < 1e-2);
            REQUIRE(std::abs(res.x_hat.eta_hat.imag()) < 1e-2);
        }
        converged += res.converged;
        recovered += res.recovered;
    }
    REQUIRE(converged + recovered == 30);
}

TEST_CASE("converged runs respect the feasibility slack") {
    RandomStream rng(43, 0);
    DualAscentConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
        auto [z0, z1] = rng.normal_pair();
        EstimationResult res =
            lisce::des_estimate(stock_design(), real_obs(1.5 * z0, 1.5 * z1), cfg);
        if (res.converged) {
            REQUIRE(res.c1_violation <= cfg.feas_tol);
            REQUIRE(res.c2_violation <= cfg.feas_tol);
        }
    }
}

TEST_CASE("configuration validation") {
    DualAscentConfig bad;
    bad.eps0 = -0.5;
    REQUIRE_THROWS_AS(lisce::des_estimate(stock_design(), real_obs(1, 1), bad),
                      lisce::invalid_parameter_error);
    DualAscentConfig zero_t;
    zero_t.t_max = 0;
    REQUIRE_THROWS_AS(lisce::des_estimate(stock_design(), real_obs(1, 1), zero_t),
                      lisce::invalid_parameter_error);
}
