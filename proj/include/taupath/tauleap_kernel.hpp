// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "taupath/kernel.hpp"
#include "taupath/model.hpp"
#include "taupath/rng.hpp"

namespace taupath {

/// min(tau_max, horizon - t). Throws ConfigError unless t < horizon and
/// tau_max > 0.
double get_tau(double t, double horizon, const TauLeapConfig& cfg);

/// Poisson(lambda_k(z) * tau) firings for every reaction into `out` (size K).
/// Reactions with zero mean get 0 without consuming randomness.
void get_reaction_firings(const ReactionNetwork& net,
                          std::span<const std::int64_t> z, double tau,
                          const ParameterSet& p, RngStream& s,
                          std::span<std::int64_t> out);
std::vector<std::int64_t> get_reaction_firings(const ReactionNetwork& net,
                                               std::span<const std::int64_t> z,
                                               double tau, const ParameterSet& p,
                                               RngStream& s);

/// One leap from (z, t) of length tau, with the state recorded at sorted
/// intermediate times sigma[0] <= ... <= sigma[eta-1]. All firings use the
/// propensities at z.
struct LeapFrame {
  double t = 0.0;
  double tau = 0.0;
  State z;
  std::vector<double> sigma;
  std::vector<State> z_hat;  // z_hat[j] is the state at sigma[j]
  State end;                 // state at t + tau
};

/// Draws eta uniform times in [t, t + tau), sorts them, and fills `frame`
/// by Poisson-bridge interpolation. `frame` buffers are reused.
void leap_with_interpolation(const ReactionNetwork& net, const State& z, double t,
                             double tau, std::uint64_t eta, const ParameterSet& p,
                             RngStream& s, LeapFrame& frame,
                             KernelCounters* counters = nullptr);

/// As leap_with_interpolation with caller-supplied sorted times in [t, t+tau].
void leap_through_times(const ReactionNetwork& net, const State& z, double t,
                        double tau, std::span<const double> sigma,
                        const ParameterSet& p, RngStream& s, LeapFrame& frame,
                        KernelCounters* counters = nullptr);

/// Euler tau-leap path from 0 to `horizon` with step get_tau.
State simulate_tauleap(const ReactionNetwork& net, State x0, double horizon,
                       const ParameterSet& p, const TauLeapConfig& cfg,
                       RngStream& s, KernelCounters* counters = nullptr);

/// f(z2) - f(z1) after simulating the split-coupled tau-leap pair from time
/// t to the horizon. Propensities are frozen at the start of each leap and
/// the loop stops once the states coincide.
double coupled_difference_tau(const ReactionNetwork& net, State z1, State z2,
                              double t, double horizon, const ParameterSet& p,
                              const TauLeapConfig& cfg, RngStream& s,
                              KernelCounters* counters = nullptr);

/// Tau-leap pair under the split (CFD) coupling: a common Poisson count at
/// the minimum propensity plus independent residual counts per path.
std::pair<State, State> simulate_cfd_pair_tau(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, const TauLeapConfig& cfg,
    RngStream& s, KernelCounters* counters = nullptr);

/// Tau-leap pair under common reaction paths: reaction k of both paths draws
/// from its own copy of `s.derive(k)` with a one-uniform Poisson sampler, so
/// equal means give equal counts.
std::pair<State, State> simulate_crp_pair_tau(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, const TauLeapConfig& cfg,
    const RngStream& s, KernelCounters* counters = nullptr);

}  // namespace taupath
