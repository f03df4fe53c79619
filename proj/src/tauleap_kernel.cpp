// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/tauleap_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "taupath/distributions.hpp"
#include "taupath/error.hpp"

namespace taupath {

namespace {

double advance(double t, double tau, double horizon) {
  return tau >= horizon - t ? horizon : t + tau;
}

std::int64_t poisson_or_zero(RngStream& s, double mean) {
  return mean > 0.0 ? sample_poisson(s, mean) : 0;
}

void apply_firings(const ReactionNetwork& net, std::span<std::int64_t> x,
                   std::span<const std::int64_t> firings,
                   KernelCounters* counters) {
  bool clamped = false;
  for (std::size_t k = 0; k < firings.size(); ++k) {
    if (firings[k] != 0)
      clamped |= apply_stoichiometry(x, net.reactions()[k].changes, firings[k]);
  }
  if (counters) {
    ++counters->leaps;
    if (clamped) ++counters->clamps;
  }
}

// Joint split-coupled leaps of (z1, z2) from t to the horizon.
void split_leaps(const ReactionNetwork& net, State& z1, State& z2, double t,
                 double horizon, const ParameterSet& p1, const ParameterSet& p2,
                 const TauLeapConfig& cfg, RngStream& s, bool stop_when_equal,
                 KernelCounters* counters) {
  const std::size_t K = net.reaction_count();
  std::vector<double> a1(K), a2(K);
  while (t < horizon) {
    if (stop_when_equal && z1 == z2) break;
    const double tau = get_tau(t, horizon, cfg);
    net.propensities(z1, p1, a1);
    net.propensities(z2, p2, a2);
    bool clamped = false;
    for (std::size_t k = 0; k < K; ++k) {
      const double m = std::min(a1[k], a2[k]);
      const std::int64_t common = poisson_or_zero(s, m * tau);
      const std::int64_t own1 = poisson_or_zero(s, (a1[k] - m) * tau);
      const std::int64_t own2 = poisson_or_zero(s, (a2[k] - m) * tau);
      const auto& changes = net.reactions()[k].changes;
      if (common + own1 != 0) clamped |= apply_stoichiometry(z1, changes, common + own1);
      if (common + own2 != 0) clamped |= apply_stoichiometry(z2, changes, common + own2);
    }
    if (counters) {
      ++counters->leaps;
      if (clamped) ++counters->clamps;
    }
    t = advance(t, tau, horizon);
  }
}

}  // namespace

double get_tau(double t, double horizon, const TauLeapConfig& cfg) {
  if (!(cfg.tau_max > 0.0)) throw ConfigError("tau_max must be positive");
  if (!(t < horizon)) throw ConfigError("get_tau called at or past the horizon");
  return std::min(cfg.tau_max, horizon - t);
}

void get_reaction_firings(const ReactionNetwork& net,
                          std::span<const std::int64_t> z, double tau,
                          const ParameterSet& p, RngStream& s,
                          std::span<std::int64_t> out) {
  if (!(tau >= 0.0)) throw ConfigError("negative leap length");
  const std::size_t K = net.reaction_count();
  for (std::size_t k = 0; k < K; ++k)
    out[k] = poisson_or_zero(s, net.propensity(k, z, p) * tau);
}

std::vector<std::int64_t> get_reaction_firings(const ReactionNetwork& net,
                                               std::span<const std::int64_t> z,
                                               double tau, const ParameterSet& p,
                                               RngStream& s) {
  std::vector<std::int64_t> out(net.reaction_count());
  get_reaction_firings(net, z, tau, p, s, out);
  return out;
}

void leap_through_times(const ReactionNetwork& net, const State& z, double t,
                        double tau, std::span<const double> sigma,
                        const ParameterSet& p, RngStream& s, LeapFrame& frame,
                        KernelCounters* counters) {
  const std::size_t K = net.reaction_count();
  std::vector<double> rates(K);
  net.propensities(z, p, rates);

  frame.t = t;
  frame.tau = tau;
  frame.z = z;
  frame.sigma.assign(sigma.begin(), sigma.end());
  frame.z_hat.resize(sigma.size());

  bool clamped = false;
  auto segment = [&](State& x, double length) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::int64_t n = poisson_or_zero(s, rates[k] * length);
      if (n != 0) clamped |= apply_stoichiometry(x, net.reactions()[k].changes, n);
    }
  };

  double prev_time = t;
  const State* prev = &z;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (sigma[j] < prev_time || sigma[j] > t + tau)
      throw ConfigError("interpolation times must be sorted within the leap");
    frame.z_hat[j] = *prev;
    segment(frame.z_hat[j], sigma[j] - prev_time);
    prev_time = sigma[j];
    prev = &frame.z_hat[j];
  }
  frame.end = *prev;
  segment(frame.end, t + tau - prev_time);
  if (counters) {
    ++counters->leaps;
    if (clamped) ++counters->clamps;
  }
}

void leap_with_interpolation(const ReactionNetwork& net, const State& z, double t,
                             double tau, std::uint64_t eta, const ParameterSet& p,
                             RngStream& s, LeapFrame& frame,
                             KernelCounters* counters) {
  if (eta < 1) throw ConfigError("eta must be at least 1");
  std::vector<double> sigma(eta);
  for (double& v : sigma) v = t + s.next_uniform() * tau;
  std::stable_sort(sigma.begin(), sigma.end());
  leap_through_times(net, z, t, tau, sigma, p, s, frame, counters);
}

State simulate_tauleap(const ReactionNetwork& net, State x, double horizon,
                       const ParameterSet& p, const TauLeapConfig& cfg,
                       RngStream& s, KernelCounters* counters) {
  if (horizon < 0.0) throw ConfigError("negative time horizon");
  std::vector<std::int64_t> firings(net.reaction_count());
  double t = 0.0;
  while (t < horizon) {
    const double tau = get_tau(t, horizon, cfg);
    get_reaction_firings(net, x, tau, p, s, firings);
    apply_firings(net, x, firings, counters);
    t = advance(t, tau, horizon);
  }
  return x;
}

double coupled_difference_tau(const ReactionNetwork& net, State z1, State z2,
                              double t, double horizon, const ParameterSet& p,
                              const TauLeapConfig& cfg, RngStream& s,
                              KernelCounters* counters) {
  if (t > horizon) throw ConfigError("coupled difference started past the horizon");
  split_leaps(net, z1, z2, t, horizon, p, p, cfg, s, true, counters);
  if (z1 == z2) return 0.0;
  return net.observe(z2) - net.observe(z1);
}

std::pair<State, State> simulate_cfd_pair_tau(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, const TauLeapConfig& cfg,
    RngStream& s, KernelCounters* counters) {
  if (horizon < 0.0) throw ConfigError("negative time horizon");
  State z1 = x0, z2 = x0;
  split_leaps(net, z1, z2, 0.0, horizon, minus, plus, cfg, s, false, counters);
  return {std::move(z1), std::move(z2)};
}

std::pair<State, State> simulate_crp_pair_tau(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, const TauLeapConfig& cfg,
    const RngStream& s, KernelCounters* counters) {
  if (horizon < 0.0) throw ConfigError("negative time horizon");
  const std::size_t K = net.reaction_count();
  std::vector<RngStream> streams1, streams2;
  streams1.reserve(K);
  for (std::size_t k = 0; k < K; ++k) streams1.push_back(s.derive(k));
  streams2 = streams1;

  State z1 = x0, z2 = x0;
  std::vector<double> a1(K), a2(K);
  std::vector<std::int64_t> r1(K), r2(K);
  double t = 0.0;
  while (t < horizon) {
    const double tau = get_tau(t, horizon, cfg);
    net.propensities(z1, minus, a1);
    net.propensities(z2, plus, a2);
    for (std::size_t k = 0; k < K; ++k) {
      r1[k] = sample_poisson_common(streams1[k], a1[k] * tau);
      r2[k] = sample_poisson_common(streams2[k], a2[k] * tau);
    }
    apply_firings(net, z1, r1, counters);
    apply_firings(net, z2, r2, counters);
    t = advance(t, tau, horizon);
  }
  return {std::move(z1), std::move(z2)};
}

}  // namespace taupath
