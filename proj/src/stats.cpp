// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/stats.hpp"

#include <algorithm>
#include <cmath>

#include "taupath/error.hpp"

namespace taupath {

void Moments::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Moments::merge(const Moments& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ = (na * mean_ + nb * other.mean_) / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

SensitivityEstimate aggregate(const Moments& moments) {
  if (moments.count() < 2) throw ConfigError("at least two samples are required");
  const double n = static_cast<double>(moments.count());
  SensitivityEstimate est;
  est.n = moments.count();
  est.mean = moments.mean();
  est.stddev = std::sqrt(std::max(moments.m2(), 0.0) / (n * (n - 1.0)));
  return est;
}

SensitivityEstimate aggregate(std::span<const double> samples) {
  Moments m;
  for (double x : samples) m.add(x);
  return aggregate(m);
}

void compute_metrics(SensitivityEstimate& est, const MetricsRequest& request) {
  est.cost_per_sample = request.cost_per_sample;
  if (request.reference) {
    if (*request.reference == 0.0)
      throw ConfigError("relative error needs a nonzero reference value");
    est.re_percent =
        std::fabs(est.mean - *request.reference) / std::fabs(*request.reference) * 100.0;
  }
  if (request.rsd) {
    if (est.mean == 0.0) throw ConfigError("relative standard deviation of a zero mean");
    const double sigma = std::sqrt(static_cast<double>(est.n)) * est.stddev;
    est.rsd = sigma / std::fabs(est.mean);
    est.rsdcc = *est.rsd * *est.rsd * request.cost_per_sample;
  }
}

}  // namespace taupath
