// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace taupath {

/// Streaming count, mean and sum of squared deviations.
class Moments {
 public:
  void add(double x) noexcept;
  /// Chan et al. pairwise update; merging partial moments in a fixed order
  /// is deterministic.
  void merge(const Moments& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double m2() const noexcept { return m2_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SensitivityEstimate {
  double mean = 0.0;
  /// Standard deviation of the estimator, sqrt(sum (s - mean)^2 / (N (N-1))).
  double stddev = 0.0;
  std::uint64_t n = 0;
  double cost_per_sample = 0.0;  // seconds
  std::optional<double> rsd;
  std::optional<double> rsdcc;  // seconds
  std::optional<double> re_percent;

  std::optional<double> c_constant;
  std::optional<double> mean_rho_tot;
  /// Fraction of Bernoulli probabilities that hit the cap of 1.
  std::optional<double> saturation_fraction;
  double clamp_rate = 0.0;
  unsigned workers = 1;
  std::string cost_basis = "summed worker wall-clock seconds per sample";
};

/// Mean and estimator standard deviation. Throws ConfigError when N < 2.
SensitivityEstimate aggregate(const Moments& moments);
SensitivityEstimate aggregate(std::span<const double> samples);

struct MetricsRequest {
  std::optional<double> reference;
  double cost_per_sample = 0.0;
  bool rsd = true;
};

/// Fills cost, RSD, RSDCC and (with a reference) RE. Throws ConfigError for a
/// zero reference or, when RSD is requested, a zero mean.
void compute_metrics(SensitivityEstimate& est, const MetricsRequest& request);

}  // namespace taupath
