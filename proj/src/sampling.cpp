// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>
#include <vector>

namespace taupath {

namespace {

constexpr std::uint64_t kBlockSize = 256;

struct BlockResult {
  SampleRun partial;
  std::exception_ptr error;
};

}  // namespace

RngStream sample_stream(std::uint64_t seed, std::uint64_t index) {
  return RngStream(seed).derive(0).derive(index);
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

SampleRun run_samples(std::uint64_t n, unsigned workers,
                      const std::function<SampleOutcome(std::uint64_t)>& sample) {
  using Clock = std::chrono::steady_clock;
  const auto wall_start = Clock::now();
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(blocks, 1)));

  std::vector<BlockResult> results(blocks);
  std::vector<double> busy(workers, 0.0);
  std::atomic<std::uint64_t> next{0};

  auto work = [&](unsigned w) {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const auto start = Clock::now();
      BlockResult& r = results[b];
      try {
        const std::uint64_t end = std::min(n, (b + 1) * kBlockSize);
        for (std::uint64_t i = b * kBlockSize; i < end; ++i) {
          const SampleOutcome o = sample(i);
          r.partial.moments.add(o.value);
          r.partial.rho_tot += o.rho_tot;
          r.partial.bernoulli_trials += o.bernoulli_trials;
          r.partial.saturated += o.saturated;
          r.partial.counters += o.counters;
        }
      } catch (...) {
        r.error = std::current_exception();
      }
      busy[w] += std::chrono::duration<double>(Clock::now() - start).count();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  SampleRun run;
  for (const BlockResult& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    run.moments.merge(r.partial.moments);
    run.rho_tot += r.partial.rho_tot;
    run.bernoulli_trials += r.partial.bernoulli_trials;
    run.saturated += r.partial.saturated;
    run.counters += r.partial.counters;
  }
  for (double b : busy) run.worker_seconds += b;
  run.wall_seconds = std::chrono::duration<double>(Clock::now() - wall_start).count();
  run.workers = workers;
  return run;
}

SensitivityEstimate summarize(const SampleRun& run,
                              std::optional<double> reference) {
  SensitivityEstimate est = aggregate(run.moments);
  MetricsRequest request;
  request.reference = reference;
  request.cost_per_sample = run.worker_seconds / static_cast<double>(est.n);
  request.rsd = est.mean != 0.0;
  compute_metrics(est, request);
  const std::uint64_t steps = run.counters.leaps + run.counters.events;
  est.clamp_rate =
      steps == 0 ? 0.0 : static_cast<double>(run.counters.clamps) / static_cast<double>(steps);
  est.workers = run.workers;
  return est;
}

}  // namespace taupath
