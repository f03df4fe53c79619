// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "taupath/kernel.hpp"
#include "taupath/model.hpp"
#include "taupath/rng.hpp"
#include "taupath/sampling.hpp"
#include "taupath/stats.hpp"

namespace taupath {

struct IpaConfig {
  Kernel kernel = Kernel::kTauLeap;
  TauLeapConfig tau;
  /// Expected number of auxiliary coupled pairs per sample.
  std::uint64_t m0 = 10;
  /// Pilot runs used to select the normalizing constant.
  std::uint64_t n0 = 1000;
  /// Normalizing constant; selected from pilot runs when empty.
  std::optional<double> c;
};

/// Per-sample diagnostics. `rho_tot` counts the auxiliary pairs simulated.
using IpaSampleTrace = SampleOutcome;

/// Mean accumulated sensitivity mass sum_k |d lambda_k / d theta| dt over
/// `n0` pilot paths, divided by n0 * m0. Pilot path n reads
/// `pilot.derive(n)`. Throws ConfigError when the mass is zero.
double select_normalizing_constant(const ReactionNetwork& net, const State& x0,
                                   double horizon, const ParameterSet& p,
                                   std::size_t parameter, const IpaConfig& cfg,
                                   const RngStream& pilot, unsigned workers = 1);

/// max(ceil(mass / c), 1) where mass = sum_k |d lambda_k| * tau.
std::uint64_t compute_eta(double mass, double c);
std::uint64_t compute_eta(const ReactionNetwork& net,
                          std::span<const std::int64_t> z, double tau, double c,
                          const ParameterSet& p, std::size_t parameter);

/// One realization of the integral-path estimator. `cfg.c` must be set.
IpaSampleTrace generate_sample_ipa(const ReactionNetwork& net, const State& x0,
                                   double horizon, const ParameterSet& p,
                                   std::size_t parameter, const IpaConfig& cfg,
                                   const RngStream& sample);

struct IpaEstimate {
  SensitivityEstimate estimate;
  SampleRun run;
};

/// Selects C (unless preset), then aggregates n samples. Sample i reads
/// sample_stream(seed, i); pilot runs read RngStream(seed).derive(1).
IpaEstimate estimate_sensitivity_ipa(const ReactionNetwork& net, const State& x0,
                                     double horizon, const ParameterSet& p,
                                     std::size_t parameter, IpaConfig cfg,
                                     std::uint64_t n, const RunOptions& options,
                                     std::optional<double> reference = {});

}  // namespace taupath
