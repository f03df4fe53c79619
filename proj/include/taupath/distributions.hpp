// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "taupath/rng.hpp"

namespace taupath {

/// Means below this use sequential-search inversion; at or above it the
/// samplers switch to their large-mean method.
inline constexpr double kPoissonSmallMeanCutoff = 10.0;

/// Poisson(mean) draw: inversion by sequential search for mean < 10, Hormann's
/// transformed rejection (PTRS) otherwise. Throws ConfigError for a negative
/// or non-finite mean.
std::int64_t sample_poisson(RngStream& s, double mean);

/// Poisson-like draw that consumes exactly one uniform, so two calls on copies
/// of the same stream are monotonically coupled in `mean`. Exact inversion
/// below the cutoff, rounded normal approximation through the same uniform
/// above it. Used for common-random-number coupling.
std::int64_t sample_poisson_common(RngStream& s, double mean);

/// Exp(rate) by inversion, -ln(1 - u) / rate with u in (0, 1); always finite
/// and positive. Throws ConfigError for rate <= 0.
double sample_exponential(RngStream& s, double rate);

/// 1 with probability p. Always consumes one uniform. Throws ConfigError for
/// p outside [0, 1].
bool sample_bernoulli(RngStream& s, double p);

}  // namespace taupath
