// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/fd_estimator.hpp"

#include <utility>

#include "taupath/error.hpp"
#include "taupath/exact_kernel.hpp"
#include "taupath/tauleap_kernel.hpp"

namespace taupath {

namespace {

void check_config(const FdConfig& cfg) {
  if (!(cfg.h > 0.0)) throw ConfigError("perturbation h must be positive");
  if (cfg.kernel == Kernel::kTauLeap && !(cfg.tau.tau_max > 0.0))
    throw ConfigError("tau_max must be positive");
}

}  // namespace

double generate_sample_fd(const ReactionNetwork& net, const State& x0,
                          double horizon, const ParameterSet& p,
                          std::size_t parameter, const FdConfig& cfg,
                          const RngStream& sample, KernelCounters* counters) {
  check_config(cfg);
  const double theta = p[parameter];
  const ParameterSet minus = p.with(parameter, theta - cfg.h / 2);
  const ParameterSet plus = p.with(parameter, theta + cfg.h / 2);
  const bool exact = cfg.kernel == Kernel::kExact;

  std::pair<State, State> ends;
  switch (cfg.coupling) {
    case Coupling::kCfd: {
      RngStream s = sample;
      ends = exact ? simulate_cfd_pair_exact(net, x0, horizon, minus, plus, s,
                                             {cfg.early_exit}, counters)
                   : simulate_cfd_pair_tau(net, x0, horizon, minus, plus, cfg.tau, s,
                                           counters);
      break;
    }
    case Coupling::kCrp:
      ends = exact ? simulate_crp_pair_exact(net, x0, horizon, minus, plus, sample,
                                             counters)
                   : simulate_crp_pair_tau(net, x0, horizon, minus, plus, cfg.tau,
                                           sample, counters);
      break;
    case Coupling::kIndependent: {
      RngStream s1 = sample.derive(0);
      RngStream s2 = sample.derive(1);
      if (exact) {
        ends.first = simulate_ssa(net, x0, horizon, minus, s1, counters);
        ends.second = simulate_ssa(net, x0, horizon, plus, s2, counters);
      } else {
        ends.first = simulate_tauleap(net, x0, horizon, minus, cfg.tau, s1, counters);
        ends.second = simulate_tauleap(net, x0, horizon, plus, cfg.tau, s2, counters);
      }
      break;
    }
  }
  return (net.observe(ends.second) - net.observe(ends.first)) / cfg.h;
}

SensitivityEstimate estimate_sensitivity_fd(const ReactionNetwork& net,
                                            const State& x0, double horizon,
                                            const ParameterSet& p,
                                            std::size_t parameter,
                                            const FdConfig& cfg, std::uint64_t n,
                                            const RunOptions& options,
                                            std::optional<double> reference) {
  if (n < 2) throw ConfigError("at least two samples are required");
  check_config(cfg);
  const SampleRun run = run_samples(n, options.workers, [&](std::uint64_t i) {
    SampleOutcome o;
    o.value = generate_sample_fd(net, x0, horizon, p, parameter, cfg,
                                 sample_stream(options.seed, i), &o.counters);
    return o;
  });
  return summarize(run, reference);
}

}  // namespace taupath
