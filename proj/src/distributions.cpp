// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/distributions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <string>

#include "taupath/error.hpp"

namespace taupath {

namespace {

void check_mean(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw ConfigError("Poisson mean must be finite and non-negative, got " +
                      std::to_string(mean));
}

// Sequential search through the CDF starting at 0.
std::int64_t poisson_inversion(double u, double mean) {
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  while (u > cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    // Rounding can leave the accumulated CDF just below u in the far tail.
    if (p == 0.0 || k > 1000) break;
  }
  return k;
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::int64_t poisson_ptrs(RngStream& s, double mean) {
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = s.next_uniform() - 0.5;
    const double v = s.next_uniform();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + kd * log_mean - std::lgamma(kd + 1.0);
    if (lhs <= rhs) return static_cast<std::int64_t>(kd);
  }
}

}  // namespace

std::int64_t sample_poisson(RngStream& s, double mean) {
  check_mean(mean);
  if (mean < kPoissonSmallMeanCutoff) return poisson_inversion(s.next_uniform(), mean);
  return poisson_ptrs(s, mean);
}

std::int64_t sample_poisson_common(RngStream& s, double mean) {
  check_mean(mean);
  const double u = s.next_open_uniform();
  if (mean < kPoissonSmallMeanCutoff) return poisson_inversion(u, mean);
  const double z = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
  const double k = std::floor(mean + std::sqrt(mean) * z + 0.5);
  return k < 0.0 ? 0 : static_cast<std::int64_t>(k);
}

double sample_exponential(RngStream& s, double rate) {
  if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
  return -std::log1p(-s.next_open_uniform()) / rate;
}

bool sample_bernoulli(RngStream& s, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError("Bernoulli probability outside [0, 1]");
  return s.next_uniform() < p;
}

}  // namespace taupath
