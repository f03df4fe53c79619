// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <utility>

#include "taupath/kernel.hpp"
#include "taupath/model.hpp"
#include "taupath/rng.hpp"

namespace taupath {

struct SsaStep {
  double time;
  std::optional<std::size_t> fired;
};

/// One step of Gillespie's direct method from (x, t). Updates x in place.
/// When the next jump would land past `horizon`, or every propensity is
/// zero, x is left unchanged and the returned time is `horizon`.
/// `rates` is scratch space of size K.
SsaStep ssa_step(const ReactionNetwork& net, std::span<std::int64_t> x, double t,
                 double horizon, const ParameterSet& p, RngStream& s,
                 std::span<double> rates, KernelCounters* counters = nullptr);

/// Exact CTMC state at `horizon`.
State simulate_ssa(const ReactionNetwork& net, State x0, double horizon,
                   const ParameterSet& p, RngStream& s,
                   KernelCounters* counters = nullptr);

/// f(Z2(T)) - f(Z1(T)) for the split-coupled pair started at time t from
/// (z1, z2), both with parameters p. The pair is simulated exactly as one
/// CTMC with 3K channels and stops as soon as the paths meet.
double coupled_difference_exact(const ReactionNetwork& net, State z1, State z2,
                                double t, double horizon, const ParameterSet& p,
                                RngStream& s, KernelCounters* counters = nullptr);

struct CoupledPairOptions {
  /// Stop once the states coincide and the coupling is provably absorbing
  /// (identical parameter sets). With differing parameters equal states do
  /// not stay equal, so no early exit is taken.
  bool early_exit = true;
};

/// Split-coupled (CFD) exact pair at parameter sets `minus` and `plus`.
std::pair<State, State> simulate_cfd_pair_exact(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, RngStream& s,
    CoupledPairOptions options = {}, KernelCounters* counters = nullptr);

/// Common-reaction-path exact pair: both paths are driven by the same unit
/// rate Poisson processes, channel k reading stream `s.derive(k)`, and are
/// simulated with the modified next reaction method.
std::pair<State, State> simulate_crp_pair_exact(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, const RngStream& s,
    KernelCounters* counters = nullptr);

/// Modified next reaction method for a single path, channel k driven by
/// `s.derive(k)`.
State simulate_mnrm(const ReactionNetwork& net, State x0, double horizon,
                    const ParameterSet& p, const RngStream& s,
                    KernelCounters* counters = nullptr);

/// Instrumented split coupling used by tests: simulates the pair to the
/// horizon without early exit and records absorption violations.
std::pair<State, State> simulate_split_pair_exact(
    const ReactionNetwork& net, State z1, State z2, double t, double horizon,
    const ParameterSet& p1, const ParameterSet& p2, RngStream& s,
    bool early_exit, KernelCounters* counters = nullptr);

}  // namespace taupath
