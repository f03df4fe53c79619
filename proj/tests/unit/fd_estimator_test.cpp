// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "taupath/error.hpp"
#include "taupath/exact_kernel.hpp"
#include "taupath/fd_estimator.hpp"
#include "test_support.hpp"

using namespace taupath;
using namespace taupath::testing;

TEST_CASE("a sample is the scaled difference of a coupled pair") {
  const ReactionNetwork bd = bundled_model("birth_death.model");
  const ParameterSet& p = bd.default_parameters();
  const std::size_t theta2 = bd.parameter_index("theta2");
  for (double h : {0.1, 0.05}) {
    CAPTURE(h);
    FdConfig cfg;
    cfg.h = h;
    cfg.coupling = Coupling::kCrp;
    for (int i = 0; i < 50; ++i) {
      const RngStream s = sample_stream(2, static_cast<std::uint64_t>(i));
      auto [a, b] = simulate_crp_pair_exact(bd, State{0}, 5.0, p.with(theta2, 0.1 - h / 2),
                                            p.with(theta2, 0.1 + h / 2), s);
      REQUIRE(generate_sample_fd(bd, State{0}, 5.0, p, theta2, cfg, s) ==
              static_cast<double>(b[0] - a[0]) / h);
    }
  }
}

TEST_CASE("invalid perturbations") {
  const ReactionNetwork bd = bundled_model("birth_death.model");
  const ParameterSet p = bd.default_parameters().with("theta2", 0.01);
  const std::size_t theta2 = bd.parameter_index("theta2");
  FdConfig cfg;
  // theta2 - h/2 < 0 makes the death propensity negative once X > 0.
  CHECK_THROWS_AS(generate_sample_fd(bd, State{5}, 5.0, p, theta2, cfg, sample_stream(1, 0)),
                  EvalError);
  cfg.h = 0.0;
  CHECK_THROWS_AS(generate_sample_fd(bd, State{5}, 5.0, p, theta2, cfg, sample_stream(1, 0)),
                  ConfigError);
  CHECK_THROWS_AS(estimate_sensitivity_fd(bd, State{0}, 5.0, bd.default_parameters(), theta2,
                                          FdConfig{}, 1, {}),
                  ConfigError);
}

TEST_CASE("birth-death finite differences") {
  const ReactionNetwork bd = bundled_model("birth_death.model");
  const ParameterSet& p = bd.default_parameters();
  const std::size_t theta2 = bd.parameter_index("theta2");
  const double target = bd_centered_difference(0.1, 0.1, 5.0);
  const RunOptions run{11, 1};

  SUBCASE("both exact couplings hit the centered difference") {
    FdConfig cfd, crp;
    crp.coupling = Coupling::kCrp;
    const SensitivityEstimate a = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, cfd, 20000, run);
    const SensitivityEstimate b = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, crp, 20000, run);
    CHECK(std::fabs(a.mean - target) < 3 * a.stddev);
    CHECK(std::fabs(b.mean - target) < 3 * b.stddev);
    CHECK(std::fabs(a.mean - b.mean) < 3 * std::hypot(a.stddev, b.stddev));
  }
  SUBCASE("coupling reduces variance far below independent paths") {
    FdConfig cfd, indep;
    indep.coupling = Coupling::kIndependent;
    const SensitivityEstimate a = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, cfd, 10000, run);
    const SensitivityEstimate b = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, indep, 10000, run);
    // The standard error of a standard deviation is about sd / sqrt(2N).
    const double sep = 3 * std::hypot(a.stddev, b.stddev) / std::sqrt(2.0 * 10000);
    CHECK(a.stddev + sep < b.stddev);
    CHECK(std::fabs(b.mean - target) < 3 * b.stddev);
  }
  SUBCASE("early exit changes nothing when the parameters differ") {
    FdConfig on, off;
    off.early_exit = false;
    const SensitivityEstimate a = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, on, 5000, run);
    const SensitivityEstimate b = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, off, 5000, run);
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
  }
  SUBCASE("tau-leap couplings agree with each other") {
    FdConfig cfd, crp;
    cfd.kernel = crp.kernel = Kernel::kTauLeap;
    cfd.tau.tau_max = crp.tau.tau_max = 0.5;
    crp.coupling = Coupling::kCrp;
    const SensitivityEstimate a = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, cfd, 10000, run);
    const SensitivityEstimate b = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, crp, 10000, run);
    CHECK(std::fabs(a.mean - b.mean) < 3 * std::hypot(a.stddev, b.stddev));
  }
  SUBCASE("results are independent of the worker count") {
    FdConfig crp;
    crp.coupling = Coupling::kCrp;
    const SensitivityEstimate a = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, crp, 1000, {4, 1});
    const SensitivityEstimate b = estimate_sensitivity_fd(bd, State{0}, 5.0, p, theta2, crp, 1000, {4, 3});
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
  }
}
