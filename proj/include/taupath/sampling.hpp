// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "taupath/kernel.hpp"
#include "taupath/rng.hpp"
#include "taupath/stats.hpp"

namespace taupath {

struct RunOptions {
  std::uint64_t seed = 0;
  /// 0 selects the available hardware parallelism.
  unsigned workers = 0;
};

/// One estimator realization plus its diagnostics.
struct SampleOutcome {
  double value = 0.0;
  std::uint64_t rho_tot = 0;
  std::uint64_t bernoulli_trials = 0;
  std::uint64_t saturated = 0;
  KernelCounters counters;
};

struct SampleRun {
  Moments moments;
  std::uint64_t rho_tot = 0;
  std::uint64_t bernoulli_trials = 0;
  std::uint64_t saturated = 0;
  KernelCounters counters;
  /// Busy time summed over workers.
  double worker_seconds = 0.0;
  double wall_seconds = 0.0;
  unsigned workers = 1;
};

/// Stream owned by sample `index` of a run seeded with `seed`.
RngStream sample_stream(std::uint64_t seed, std::uint64_t index);

/// Evaluates `sample(i)` for i in [0, n) on a worker pool. Indices are split
/// into fixed blocks whose partial results are merged in block order, so the
/// outcome does not depend on the worker count. The first failing block (in
/// index order) has its exception rethrown.
SampleRun run_samples(std::uint64_t n, unsigned workers,
                      const std::function<SampleOutcome(std::uint64_t)>& sample);

unsigned resolve_workers(unsigned requested);

/// Aggregated estimate of a run with cost, RSD (when the mean is nonzero),
/// RE against `reference`, and the run's diagnostics.
SensitivityEstimate summarize(const SampleRun& run,
                              std::optional<double> reference = {});

}  // namespace taupath
