// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace taupath {

enum class Kernel { kExact, kTauLeap };

struct TauLeapConfig {
  double tau_max = 0.5;
};

/// Work and diagnostic tallies accumulated by the simulation kernels.
struct KernelCounters {
  std::uint64_t events = 0;  // SSA jumps (exact kernels)
  std::uint64_t leaps = 0;   // tau-leap state updates
  std::uint64_t clamps = 0;  // updates where a component was clamped to 0
  /// Split-coupling instrumentation: times two coincided paths separated
  /// again. Only tracked when coupled simulators run without early exit.
  std::uint64_t absorption_violations = 0;

  KernelCounters& operator+=(const KernelCounters& o) {
    events += o.events;
    leaps += o.leaps;
    clamps += o.clamps;
    absorption_violations += o.absorption_violations;
    return *this;
  }
};

}  // namespace taupath
