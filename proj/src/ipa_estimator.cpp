// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/ipa_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "taupath/distributions.hpp"
#include "taupath/error.hpp"
#include "taupath/exact_kernel.hpp"
#include "taupath/tauleap_kernel.hpp"

namespace taupath {

namespace {

// Reactions whose propensity depends on the parameter.
std::vector<std::size_t> sensitive_reactions(const ReactionNetwork& net,
                                             std::size_t parameter) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < net.reaction_count(); ++k)
    if (!net.propensity_derivative(k, parameter).is_constant(0.0)) out.push_back(k);
  return out;
}

double sensitivity_rate(const ReactionNetwork& net,
                        std::span<const std::size_t> reactions,
                        std::span<const std::int64_t> z, const ParameterSet& p,
                        std::size_t parameter) {
  double sum = 0.0;
  for (std::size_t k : reactions)
    sum += std::fabs(net.propensity_derivative_value(k, parameter, z, p));
  return sum;
}

void check_config(const IpaConfig& cfg) {
  if (cfg.m0 < 1) throw ConfigError("M0 must be at least 1");
  if (cfg.n0 < 1) throw ConfigError("N0 must be at least 1");
  if (cfg.kernel == Kernel::kTauLeap && !(cfg.tau.tau_max > 0.0))
    throw ConfigError("tau_max must be positive");
}

double pilot_mass(const ReactionNetwork& net, State z, double horizon,
                  const ParameterSet& p, std::size_t parameter,
                  std::span<const std::size_t> reactions, const IpaConfig& cfg,
                  RngStream s, KernelCounters& counters) {
  double mass = 0.0;
  double t = 0.0;
  if (cfg.kernel == Kernel::kTauLeap) {
    std::vector<std::int64_t> firings(net.reaction_count());
    while (t < horizon) {
      const double tau = get_tau(t, horizon, cfg.tau);
      mass += tau * sensitivity_rate(net, reactions, z, p, parameter);
      get_reaction_firings(net, z, tau, p, s, firings);
      for (std::size_t k = 0; k < firings.size(); ++k)
        if (firings[k] != 0) apply_stoichiometry(z, net.reactions()[k].changes, firings[k]);
      ++counters.leaps;
      t = tau >= horizon - t ? horizon : t + tau;
    }
  } else {
    std::vector<double> rates(net.reaction_count());
    while (t < horizon) {
      const double rate = sensitivity_rate(net, reactions, z, p, parameter);
      const SsaStep step = ssa_step(net, z, t, horizon, p, s, rates, &counters);
      mass += rate * (step.time - t);
      t = step.time;
      if (!step.fired) break;
    }
  }
  return mass;
}

}  // namespace

double select_normalizing_constant(const ReactionNetwork& net, const State& x0,
                                   double horizon, const ParameterSet& p,
                                   std::size_t parameter, const IpaConfig& cfg,
                                   const RngStream& pilot, unsigned workers) {
  check_config(cfg);
  if (horizon <= 0.0) throw ConfigError("time horizon must be positive");
  const auto reactions = sensitive_reactions(net, parameter);
  const SampleRun run = run_samples(cfg.n0, workers, [&](std::uint64_t n) {
    SampleOutcome o;
    o.value = pilot_mass(net, x0, horizon, p, parameter, reactions, cfg,
                         pilot.derive(n), o.counters);
    return o;
  });
  const double total = run.moments.mean() * static_cast<double>(cfg.n0);
  if (!(total > 0.0))
    throw ConfigError("no sensitivity mass along the pilot paths; the observable "
                      "does not depend on this parameter");
  return total / (static_cast<double>(cfg.n0) * static_cast<double>(cfg.m0));
}

std::uint64_t compute_eta(double mass, double c) {
  const double ratio = std::ceil(mass / c);
  if (!(ratio >= 1.0)) return 1;
  if (ratio > 1e12) throw EvalError("sub-sample count overflow; C is too small");
  return static_cast<std::uint64_t>(ratio);
}

std::uint64_t compute_eta(const ReactionNetwork& net,
                          std::span<const std::int64_t> z, double tau, double c,
                          const ParameterSet& p, std::size_t parameter) {
  double mass = 0.0;
  for (std::size_t k = 0; k < net.reaction_count(); ++k)
    mass += std::fabs(net.propensity_derivative_value(k, parameter, z, p));
  return compute_eta(mass * tau, c);
}

IpaSampleTrace generate_sample_ipa(const ReactionNetwork& net, const State& x0,
                                   double horizon, const ParameterSet& p,
                                   std::size_t parameter, const IpaConfig& cfg,
                                   const RngStream& sample) {
  check_config(cfg);
  if (!cfg.c || !(*cfg.c > 0.0)) throw ConfigError("normalizing constant not selected");
  const double c = *cfg.c;
  const auto reactions = sensitive_reactions(net, parameter);

  RngStream dyn = sample.derive(0);
  RngStream sel = sample.derive(1);
  const RngStream aux = sample.derive(2);
  std::uint64_t aux_count = 0;

  IpaSampleTrace trace;
  long double acc = 0.0L;
  State shifted;

  // One Bernoulli-thinned auxiliary pair for reaction k from state z at time
  // sigma, with weight R = d lambda_k(z) * tau spread over eta sub-samples.
  auto contribute = [&](std::size_t k, double derivative, double tau,
                        std::uint64_t eta, const State& z, double sigma) {
    const double r = derivative * tau;
    if (r == 0.0) return;
    const double ratio = std::fabs(r) / (c * static_cast<double>(eta));
    const double prob = std::min(ratio, 1.0);
    ++trace.bernoulli_trials;
    if (ratio >= 1.0) ++trace.saturated;
    if (!sample_bernoulli(sel, prob)) return;
    ++trace.rho_tot;
    shifted = z;
    apply_stoichiometry(shifted, net.reactions()[k].changes, 1);
    RngStream s = aux.derive(aux_count++);
    const double d =
        cfg.kernel == Kernel::kTauLeap
            ? coupled_difference_tau(net, z, shifted, sigma, horizon, p, cfg.tau, s,
                                     &trace.counters)
            : coupled_difference_exact(net, z, shifted, sigma, horizon, p, s,
                                       &trace.counters);
    acc += static_cast<long double>(r / (prob * static_cast<double>(eta))) * d;
  };

  State z = x0;
  double t = 0.0;
  if (cfg.kernel == Kernel::kTauLeap) {
    LeapFrame frame;
    std::vector<double> sigma;
    while (t < horizon) {
      const double tau = get_tau(t, horizon, cfg.tau);
      const std::uint64_t eta =
          compute_eta(tau * sensitivity_rate(net, reactions, z, p, parameter), c);
      sigma.resize(eta);
      for (double& v : sigma) v = t + sel.next_uniform() * tau;
      std::stable_sort(sigma.begin(), sigma.end());
      leap_through_times(net, z, t, tau, sigma, p, dyn, frame, &trace.counters);
      for (std::uint64_t j = 0; j < eta; ++j) {
        const State& zj = frame.z_hat[j];
        for (std::size_t k : reactions)
          contribute(k, net.propensity_derivative_value(k, parameter, zj, p), tau,
                     eta, zj, sigma[j]);
      }
      z = frame.end;
      t = tau >= horizon - t ? horizon : t + tau;
    }
  } else {
    std::vector<double> rates(net.reaction_count());
    std::vector<double> derivatives(reactions.size());
    while (t < horizon) {
      net.propensities(z, p, rates);
      double total = 0.0;
      for (double r : rates) total += r;
      if (!std::isfinite(total)) throw EvalError("total propensity overflowed");
      const double wait = total > 0.0 ? sample_exponential(dyn, total)
                                      : std::numeric_limits<double>::infinity();
      const double tau = std::min(wait, horizon - t);

      double mass = 0.0;
      for (std::size_t i = 0; i < reactions.size(); ++i) {
        derivatives[i] = net.propensity_derivative_value(reactions[i], parameter, z, p);
        mass += std::fabs(derivatives[i]);
      }
      if (mass > 0.0) {
        const std::uint64_t eta = compute_eta(mass * tau, c);
        for (std::uint64_t j = 0; j < eta; ++j) {
          const double sigma = t + sel.next_uniform() * tau;
          for (std::size_t i = 0; i < reactions.size(); ++i)
            contribute(reactions[i], derivatives[i], tau, eta, z, sigma);
        }
      }

      if (wait >= horizon - t) break;
      t += wait;
      double u = dyn.next_uniform() * total;
      std::size_t fired = rates.size() - 1;
      for (std::size_t k = 0; k < rates.size(); ++k) {
        if (rates[k] <= 0.0) continue;
        fired = k;
        if (u < rates[k]) break;
        u -= rates[k];
      }
      if (apply_stoichiometry(z, net.reactions()[fired].changes, 1)) ++trace.counters.clamps;
      ++trace.counters.events;
    }
  }

  trace.value = static_cast<double>(acc);
  if (!std::isfinite(trace.value)) throw EvalError("non-finite sensitivity sample");
  return trace;
}

IpaEstimate estimate_sensitivity_ipa(const ReactionNetwork& net, const State& x0,
                                     double horizon, const ParameterSet& p,
                                     std::size_t parameter, IpaConfig cfg,
                                     std::uint64_t n, const RunOptions& options,
                                     std::optional<double> reference) {
  if (n < 2) throw ConfigError("at least two samples are required");
  check_config(cfg);
  if (!cfg.c)
    cfg.c = select_normalizing_constant(net, x0, horizon, p, parameter, cfg,
                                        RngStream(options.seed).derive(1),
                                        options.workers);
  IpaEstimate out;
  out.run = run_samples(n, options.workers, [&](std::uint64_t i) {
    return generate_sample_ipa(net, x0, horizon, p, parameter, cfg,
                               sample_stream(options.seed, i));
  });
  out.estimate = summarize(out.run, reference);
  out.estimate.c_constant = cfg.c;
  out.estimate.mean_rho_tot =
      static_cast<double>(out.run.rho_tot) / static_cast<double>(n);
  out.estimate.saturation_fraction =
      out.run.bernoulli_trials == 0
          ? 0.0
          : static_cast<double>(out.run.saturated) /
                static_cast<double>(out.run.bernoulli_trials);
  return out;
}

}  // namespace taupath
