// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taupath/model.hpp"
#include "taupath/stats.hpp"

namespace taupath {

enum class Method { kEipa, kTauIpa, kEcfd, kEcrp, kTcfd, kTcrp };

std::string_view method_name(Method method);
/// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);
bool is_tau_method(Method method);
bool is_ipa_method(Method method);

struct Scenario {
  std::string model_path;
  Method method = Method::kEipa;
  std::string parameter;
  double horizon = 0.0;
  std::uint64_t n = 0;
  /// Required for tau-leap methods, rejected for exact ones.
  std::optional<double> tau_max;
  std::uint64_t m0 = 10;
  std::uint64_t n0 = 1000;
  double h = 0.1;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::optional<double> reference;
  /// Parameter overrides applied before running, e.g. a volume.
  std::vector<std::pair<std::string, double>> overrides;
};

struct ScenarioResult {
  Scenario scenario;
  SensitivityEstimate estimate;
  /// Set for sweep rows.
  std::optional<double> axis_value;
};

/// Throws ConfigError on inconsistent settings.
void validate_scenario(const Scenario& sc);

ScenarioResult run_scenario(const Scenario& sc, const ReactionNetwork& net);
ScenarioResult run_scenario(const Scenario& sc);

enum class SweepAxis { kTauMax, kM0, kVolume };
SweepAxis parse_axis(std::string_view name);
std::string_view axis_name(SweepAxis axis);

/// One row per value with the base seed. The volume axis sets parameter `V`
/// and, for integral-path methods, M0 = V.
std::vector<ScenarioResult> run_sweep(const Scenario& base, SweepAxis axis,
                                      std::span<const double> values);

/// Column names of the tabular output, in order.
std::span<const std::string_view> result_columns();

void write_csv(std::ostream& out, std::span<const ScenarioResult> rows,
               bool with_axis_value = false);
void write_json(std::ostream& out, std::span<const ScenarioResult> rows,
                bool with_axis_value = false);

}  // namespace taupath
