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

enum class Coupling {
  kCfd,
  kCrp,
  /// Uncoupled paths; only for comparing variances.
  kIndependent,
};

struct FdConfig {
  double h = 0.1;
  Coupling coupling = Coupling::kCfd;
  Kernel kernel = Kernel::kExact;
  TauLeapConfig tau;
  /// Exact CFD only; see CoupledPairOptions.
  bool early_exit = true;
};

/// (f(X at theta + h/2) - f(X at theta - h/2)) / h for one coupled pair.
double generate_sample_fd(const ReactionNetwork& net, const State& x0,
                          double horizon, const ParameterSet& p,
                          std::size_t parameter, const FdConfig& cfg,
                          const RngStream& sample,
                          KernelCounters* counters = nullptr);

/// Sample i reads sample_stream(seed, i).
SensitivityEstimate estimate_sensitivity_fd(const ReactionNetwork& net,
                                            const State& x0, double horizon,
                                            const ParameterSet& p,
                                            std::size_t parameter,
                                            const FdConfig& cfg, std::uint64_t n,
                                            const RunOptions& options,
                                            std::optional<double> reference = {});

}  // namespace taupath
