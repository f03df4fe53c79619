// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/exact_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "taupath/distributions.hpp"
#include "taupath/error.hpp"

namespace taupath {

namespace {

double checked_total(std::span<const double> rates) {
  double total = 0.0;
  for (double r : rates) total += r;
  if (!std::isfinite(total)) throw EvalError("total propensity overflowed");
  return total;
}

// Index k with probability rates[k] / total.
std::size_t select_channel(std::span<const double> rates, double total,
                           RngStream& s) {
  double u = s.next_uniform() * total;
  std::size_t last = 0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (rates[k] <= 0.0) continue;
    if (u < rates[k]) return k;
    u -= rates[k];
    last = k;
  }
  return last;
}

enum class Mover : std::uint8_t { kBoth, kFirst, kSecond };

}  // namespace

SsaStep ssa_step(const ReactionNetwork& net, std::span<std::int64_t> x, double t,
                 double horizon, const ParameterSet& p, RngStream& s,
                 std::span<double> rates, KernelCounters* counters) {
  net.propensities(x, p, rates);
  const double total = checked_total(rates);
  if (total <= 0.0) return {horizon, std::nullopt};
  const double wait = sample_exponential(s, total);
  if (t + wait > horizon) return {horizon, std::nullopt};
  const std::size_t k = select_channel(rates, total, s);
  const bool clamped = apply_stoichiometry(x, net.reactions()[k].changes, 1);
  if (counters) {
    ++counters->events;
    if (clamped) ++counters->clamps;
  }
  return {t + wait, k};
}

State simulate_ssa(const ReactionNetwork& net, State x, double horizon,
                   const ParameterSet& p, RngStream& s, KernelCounters* counters) {
  if (horizon < 0.0) throw ConfigError("negative time horizon");
  std::vector<double> rates(net.reaction_count());
  double t = 0.0;
  while (t < horizon) {
    const SsaStep step = ssa_step(net, x, t, horizon, p, s, rates, counters);
    t = step.time;
    if (!step.fired) break;
  }
  return x;
}

std::pair<State, State> simulate_split_pair_exact(
    const ReactionNetwork& net, State z1, State z2, double t, double horizon,
    const ParameterSet& p1, const ParameterSet& p2, RngStream& s,
    bool early_exit, KernelCounters* counters) {
  const std::size_t K = net.reaction_count();
  const bool absorbing = p1 == p2;
  std::vector<double> a1(K), a2(K), channel(3 * K);
  bool met = false;
  while (t < horizon) {
    if (absorbing && z1 == z2) {
      if (early_exit) break;
      met = true;
    }
    net.propensities(z1, p1, a1);
    net.propensities(z2, p2, a2);
    // Channel layout: [common k, first-only k, second-only k] per reaction.
    for (std::size_t k = 0; k < K; ++k) {
      const double m = std::min(a1[k], a2[k]);
      channel[3 * k] = m;
      channel[3 * k + 1] = a1[k] - m;
      channel[3 * k + 2] = a2[k] - m;
    }
    const double total = checked_total(channel);
    if (total <= 0.0) break;
    const double wait = sample_exponential(s, total);
    if (t + wait > horizon) break;
    t += wait;
    const std::size_t c = select_channel(channel, total, s);
    const auto& changes = net.reactions()[c / 3].changes;
    const auto mover = static_cast<Mover>(c % 3);
    bool clamped = false;
    if (mover != Mover::kSecond) clamped |= apply_stoichiometry(z1, changes, 1);
    if (mover != Mover::kFirst) clamped |= apply_stoichiometry(z2, changes, 1);
    if (counters) {
      ++counters->events;
      if (clamped) ++counters->clamps;
      if (met && z1 != z2) ++counters->absorption_violations;
    }
  }
  return {std::move(z1), std::move(z2)};
}

double coupled_difference_exact(const ReactionNetwork& net, State z1, State z2,
                                double t, double horizon, const ParameterSet& p,
                                RngStream& s, KernelCounters* counters) {
  if (t > horizon) throw ConfigError("coupled difference started past the horizon");
  if (z1 == z2) return 0.0;
  auto [e1, e2] = simulate_split_pair_exact(net, std::move(z1), std::move(z2), t,
                                            horizon, p, p, s, true, counters);
  if (e1 == e2) return 0.0;
  return net.observe(e2) - net.observe(e1);
}

std::pair<State, State> simulate_cfd_pair_exact(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, RngStream& s,
    CoupledPairOptions options, KernelCounters* counters) {
  if (horizon < 0.0) throw ConfigError("negative time horizon");
  return simulate_split_pair_exact(net, x0, x0, 0.0, horizon, minus, plus, s,
                                   options.early_exit, counters);
}

State simulate_mnrm(const ReactionNetwork& net, State x, double horizon,
                    const ParameterSet& p, const RngStream& s,
                    KernelCounters* counters) {
  if (horizon < 0.0) throw ConfigError("negative time horizon");
  const std::size_t K = net.reaction_count();
  std::vector<RngStream> channel_streams;
  channel_streams.reserve(K);
  for (std::size_t k = 0; k < K; ++k) channel_streams.push_back(s.derive(k));
  // internal[k]: integrated intensity so far; next_fire[k]: internal time of
  // the next jump of the unit-rate process Y_k.
  std::vector<double> internal(K, 0.0), next_fire(K), rates(K);
  for (std::size_t k = 0; k < K; ++k)
    next_fire[k] = sample_exponential(channel_streams[k], 1.0);

  double t = 0.0;
  for (;;) {
    net.propensities(x, p, rates);
    double best = std::numeric_limits<double>::infinity();
    std::size_t mu = K;
    for (std::size_t k = 0; k < K; ++k) {
      if (rates[k] <= 0.0) continue;
      const double dt = (next_fire[k] - internal[k]) / rates[k];
      if (dt < best) {
        best = dt;
        mu = k;
      }
    }
    if (mu == K || t + best > horizon) break;
    t += best;
    for (std::size_t k = 0; k < K; ++k) internal[k] += rates[k] * best;
    internal[mu] = next_fire[mu];
    next_fire[mu] += sample_exponential(channel_streams[mu], 1.0);
    const bool clamped = apply_stoichiometry(x, net.reactions()[mu].changes, 1);
    if (counters) {
      ++counters->events;
      if (clamped) ++counters->clamps;
    }
  }
  return x;
}

std::pair<State, State> simulate_crp_pair_exact(
    const ReactionNetwork& net, const State& x0, double horizon,
    const ParameterSet& minus, const ParameterSet& plus, const RngStream& s,
    KernelCounters* counters) {
  return {simulate_mnrm(net, x0, horizon, minus, s, counters),
          simulate_mnrm(net, x0, horizon, plus, s, counters)};
}

}  // namespace taupath
