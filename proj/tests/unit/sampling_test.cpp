// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <stdexcept>

#include "taupath/sampling.hpp"

using namespace taupath;

namespace {

SampleOutcome noisy(std::uint64_t i) {
  RngStream s = sample_stream(3, i);
  SampleOutcome o;
  o.value = s.next_uniform() * 100.0 - 50.0 + static_cast<double>(i % 7);
  o.rho_tot = i % 3;
  o.counters.events = 1;
  return o;
}

}  // namespace

TEST_CASE("sample streams are distinct per seed and index") {
  CHECK(sample_stream(1, 0) == sample_stream(1, 0));
  CHECK_FALSE(sample_stream(1, 0) == sample_stream(1, 1));
  CHECK_FALSE(sample_stream(1, 0) == sample_stream(2, 0));
  // Pilot streams live under a different child of the root.
  CHECK_FALSE(sample_stream(1, 0) == RngStream(1).derive(1).derive(0));
}

TEST_CASE("run results do not depend on the worker count") {
  const std::uint64_t n = 5000;
  const SampleRun one = run_samples(n, 1, noisy);
  CHECK(one.moments.count() == n);
  CHECK(one.counters.events == n);
  for (unsigned w : {2u, 3u, 8u}) {
    CAPTURE(w);
    const SampleRun many = run_samples(n, w, noisy);
    CHECK(many.moments.mean() == one.moments.mean());
    CHECK(many.moments.m2() == one.moments.m2());
    CHECK(many.rho_tot == one.rho_tot);
    CHECK(many.workers == w);
  }
  CHECK(run_samples(10, 8, noisy).workers == 1);
}

TEST_CASE("the first failing sample's error is rethrown") {
  auto failing = [](std::uint64_t i) -> SampleOutcome {
    if (i == 300) throw std::runtime_error("first");
    if (i == 4000) throw std::logic_error("second");
    return {};
  };
  for (unsigned w : {1u, 4u}) {
    try {
      run_samples(5000, w, failing);
      FAIL("expected an error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "first");
    }
  }
}

TEST_CASE("summarize") {
  SampleRun run = run_samples(1000, 1, noisy);
  run.worker_seconds = 2.0;
  run.counters.clamps = 10;
  const SensitivityEstimate e = summarize(run, -1.0);
  CHECK(e.cost_per_sample == doctest::Approx(2e-3));
  CHECK(e.clamp_rate == doctest::Approx(0.01));
  CHECK(e.re_percent.has_value());
  CHECK(e.rsd.has_value());
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}
