// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/scenario.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "taupath/error.hpp"
#include "taupath/fd_estimator.hpp"
#include "taupath/ipa_estimator.hpp"

namespace taupath {

namespace {

constexpr std::array<std::string_view, 6> kMethodNames = {
    "eipa", "tauipa", "ecfd", "ecrp", "tcfd", "tcrp"};

constexpr std::array<std::string_view, 17> kColumns = {
    "method", "param", "T", "N", "seed", "tau_max", "m0", "h", "mean",
    "stddev_of_estimator", "rsd", "rsdcc_seconds", "re_percent",
    "cost_per_sample_seconds", "c_constant", "mean_rho_tot", "clamp_rate"};

using Json = nlohmann::ordered_json;

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json row_json(const ScenarioResult& r) {
  const Scenario& sc = r.scenario;
  const SensitivityEstimate& e = r.estimate;
  Json j;
  j["method"] = std::string(method_name(sc.method));
  j["param"] = sc.parameter;
  j["T"] = sc.horizon;
  j["N"] = sc.n;
  j["seed"] = sc.seed;
  j["tau_max"] = optional_json(sc.tau_max);
  j["m0"] = is_ipa_method(sc.method) ? Json(sc.m0) : Json(nullptr);
  j["h"] = is_ipa_method(sc.method) ? Json(nullptr) : Json(sc.h);
  j["mean"] = e.mean;
  j["stddev_of_estimator"] = e.stddev;
  j["rsd"] = optional_json(e.rsd);
  j["rsdcc_seconds"] = optional_json(e.rsdcc);
  j["re_percent"] = optional_json(e.re_percent);
  j["cost_per_sample_seconds"] = e.cost_per_sample;
  j["c_constant"] = optional_json(e.c_constant);
  j["mean_rho_tot"] = optional_json(e.mean_rho_tot);
  j["clamp_rate"] = e.clamp_rate;
  return j;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

}  // namespace

std::string_view method_name(Method method) {
  return kMethodNames[static_cast<std::size_t>(method)];
}

Method parse_method(std::string_view name) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i)
    if (kMethodNames[i] == name) return static_cast<Method>(i);
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected eipa, tauipa, ecfd, ecrp, tcfd or tcrp)");
}

bool is_tau_method(Method method) {
  return method == Method::kTauIpa || method == Method::kTcfd ||
         method == Method::kTcrp;
}

bool is_ipa_method(Method method) {
  return method == Method::kEipa || method == Method::kTauIpa;
}

void validate_scenario(const Scenario& sc) {
  if (sc.parameter.empty()) throw ConfigError("no sensitivity parameter given");
  if (!(sc.horizon > 0.0) || !std::isfinite(sc.horizon))
    throw ConfigError("T must be positive and finite");
  if (sc.n < 2) throw ConfigError("N must be at least 2");
  if (is_tau_method(sc.method)) {
    if (!sc.tau_max) throw ConfigError("tau-leap methods need --tau-max");
    if (!(*sc.tau_max > 0.0)) throw ConfigError("tau_max must be positive");
  } else if (sc.tau_max) {
    throw ConfigError("--tau-max only applies to tau-leap methods");
  }
  if (is_ipa_method(sc.method)) {
    if (sc.m0 < 1) throw ConfigError("M0 must be at least 1");
    if (sc.n0 < 1) throw ConfigError("N0 must be at least 1");
  } else if (!(sc.h > 0.0)) {
    throw ConfigError("h must be positive");
  }
  if (sc.reference && *sc.reference == 0.0)
    throw ConfigError("reference value must be nonzero");
}

ScenarioResult run_scenario(const Scenario& sc, const ReactionNetwork& net) {
  validate_scenario(sc);
  const std::size_t param = net.parameter_index(sc.parameter);
  ParameterSet p = net.default_parameters();
  for (const auto& [name, value] : sc.overrides) p = p.with(name, value);
  const RunOptions options{sc.seed, sc.workers};
  const Kernel kernel = is_tau_method(sc.method) ? Kernel::kTauLeap : Kernel::kExact;
  TauLeapConfig tau;
  if (sc.tau_max) tau.tau_max = *sc.tau_max;

  ScenarioResult result{sc, {}, std::nullopt};
  if (is_ipa_method(sc.method)) {
    IpaConfig cfg;
    cfg.kernel = kernel;
    cfg.tau = tau;
    cfg.m0 = sc.m0;
    cfg.n0 = sc.n0;
    result.estimate = estimate_sensitivity_ipa(net, net.initial_state(), sc.horizon, p,
                                               param, cfg, sc.n, options, sc.reference)
                          .estimate;
  } else {
    FdConfig cfg;
    cfg.h = sc.h;
    cfg.kernel = kernel;
    cfg.tau = tau;
    cfg.coupling = (sc.method == Method::kEcrp || sc.method == Method::kTcrp)
                       ? Coupling::kCrp
                       : Coupling::kCfd;
    result.estimate = estimate_sensitivity_fd(net, net.initial_state(), sc.horizon, p,
                                              param, cfg, sc.n, options, sc.reference);
  }
  return result;
}

ScenarioResult run_scenario(const Scenario& sc) {
  validate_scenario(sc);
  return run_scenario(sc, load_model(sc.model_path));
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "tau_max" || name == "tau-max") return SweepAxis::kTauMax;
  if (name == "m0") return SweepAxis::kM0;
  if (name == "volume") return SweepAxis::kVolume;
  throw ConfigError("unknown sweep axis '" + std::string(name) +
                    "' (expected tau_max, m0 or volume)");
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kTauMax: return "tau_max";
    case SweepAxis::kM0: return "m0";
    case SweepAxis::kVolume: return "volume";
  }
  return "";
}

std::vector<ScenarioResult> run_sweep(const Scenario& base, SweepAxis axis,
                                      std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (axis == SweepAxis::kTauMax && !is_tau_method(base.method))
    throw ConfigError("tau_max sweeps need a tau-leap method");
  if (axis == SweepAxis::kM0 && !is_ipa_method(base.method))
    throw ConfigError("M0 sweeps need an integral-path method");

  const ReactionNetwork net = load_model(base.model_path);
  if (axis == SweepAxis::kVolume && !net.default_parameters().index_of("V"))
    throw ConfigError("volume sweeps need a model that declares parameter V");

  auto as_count = [](double v) {
    if (!(v >= 1.0) || v != std::floor(v))
      throw ConfigError("sweep value " + format_number(v) + " is not a positive integer");
    return static_cast<std::uint64_t>(v);
  };

  std::vector<ScenarioResult> rows;
  for (double v : values) {
    Scenario sc = base;
    switch (axis) {
      case SweepAxis::kTauMax:
        sc.tau_max = v;
        break;
      case SweepAxis::kM0:
        sc.m0 = as_count(v);
        break;
      case SweepAxis::kVolume:
        if (!(v > 0.0)) throw ConfigError("volume must be positive");
        sc.overrides.emplace_back("V", v);
        if (is_ipa_method(sc.method)) sc.m0 = as_count(v);
        break;
    }
    ScenarioResult r = run_scenario(sc, net);
    r.axis_value = v;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::span<const std::string_view> result_columns() { return kColumns; }

void write_csv(std::ostream& out, std::span<const ScenarioResult> rows,
               bool with_axis_value) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  if (with_axis_value) out << ",axis_value";
  out << '\n';
  for (const ScenarioResult& r : rows) {
    const Json j = row_json(r);
    for (std::size_t i = 0; i < kColumns.size(); ++i)
      out << (i ? "," : "") << csv_cell(j[std::string(kColumns[i])]);
    if (with_axis_value) out << ',' << csv_cell(optional_json(r.axis_value));
    out << '\n';
  }
}

void write_json(std::ostream& out, std::span<const ScenarioResult> rows,
                bool with_axis_value) {
  Json doc = Json::array();
  for (const ScenarioResult& r : rows) {
    Json j = row_json(r);
    if (with_axis_value) j["axis_value"] = optional_json(r.axis_value);
    j["workers"] = r.estimate.workers;
    j["cost_basis"] = r.estimate.cost_basis;
    j["saturation_fraction"] = optional_json(r.estimate.saturation_fraction);
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace taupath
