// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: estimate, sweep and validate.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "taupath/error.hpp"
#include "taupath/model.hpp"
#include "taupath/scenario.hpp"

namespace {

struct CommonOptions {
  std::string model;
  std::string method;
  std::string param;
  double horizon = 0.0;
  std::uint64_t n = 0;
  std::optional<double> tau_max;
  std::uint64_t m0 = 10;
  std::uint64_t n0 = 1000;
  double h = 0.1;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::optional<double> reference;
  std::string out = "-";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  // --h is the perturbation size, so help is long-form only.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--method", o.method, "eipa, tauipa, ecfd, ecrp, tcfd or tcrp")
      ->required();
  cmd->add_option("--param", o.param, "Parameter to differentiate against")->required();
  cmd->add_option("-T", o.horizon, "Final time")->required();
  cmd->add_option("-N", o.n, "Number of samples")->required();
  cmd->add_option("--tau-max", o.tau_max, "Maximum tau-leap step (tau methods)");
  cmd->add_option("--m0", o.m0, "Expected auxiliary pairs per sample")->capture_default_str();
  cmd->add_option("--n0", o.n0, "Pilot runs for the normalizing constant")
      ->capture_default_str();
  cmd->add_option("--h", o.h, "Finite-difference perturbation")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Root seed (default: $TAUPATH_SEED or 0)");
  cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--reference", o.reference, "Reference value for the relative error");
  cmd->add_option("--out", o.out, "Output path, - for stdout")->capture_default_str();
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("TAUPATH_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw taupath::ConfigError("TAUPATH_SEED is not an unsigned integer");
    }
  }
  return 0;
}

taupath::Scenario to_scenario(const CommonOptions& o) {
  taupath::Scenario sc;
  sc.model_path = o.model;
  sc.method = taupath::parse_method(o.method);
  sc.parameter = o.param;
  sc.horizon = o.horizon;
  sc.n = o.n;
  sc.tau_max = o.tau_max;
  sc.m0 = o.m0;
  sc.n0 = o.n0;
  sc.h = o.h;
  sc.seed = resolve_seed(o.seed);
  sc.workers = o.workers;
  sc.reference = o.reference;
  return sc;
}

void emit(const CommonOptions& o, const std::vector<taupath::ScenarioResult>& rows,
          bool sweep) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (o.out != "-") {
    file.open(o.out);
    if (!file) throw taupath::ConfigError("cannot open output file " + o.out);
    out = &file;
  }
  if (o.format == "json")
    taupath::write_json(*out, rows, sweep);
  else
    taupath::write_csv(*out, rows, sweep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter sensitivity estimation for stochastic reaction networks"};
  app.require_subcommand(1);

  CommonOptions estimate_opts;
  CLI::App* estimate = app.add_subcommand("estimate", "Run one estimator");
  add_common(estimate, estimate_opts);

  CommonOptions sweep_opts;
  std::string axis;
  std::vector<double> values;
  CLI::App* sweep = app.add_subcommand("sweep", "Run an estimator over a list of values");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "tau_max, m0 or volume")->required();
  sweep->add_option("--values", values, "Axis values")->required()->delimiter(',');

  std::string validate_model;
  CLI::App* validate = app.add_subcommand("validate", "Parse-check a model file");
  validate->add_option("--model", validate_model, "Model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) {
      emit(estimate_opts, {taupath::run_scenario(to_scenario(estimate_opts))}, false);
    } else if (*sweep) {
      const auto rows = taupath::run_sweep(to_scenario(sweep_opts),
                                           taupath::parse_axis(axis), values);
      emit(sweep_opts, rows, true);
    } else if (*validate) {
      const taupath::ReactionNetwork net = taupath::load_model(validate_model);
      std::cout << validate_model << ": " << net.species_count() << " species, "
                << net.reaction_count() << " reactions, " << net.parameter_count()
                << " parameters\n";
    }
  } catch (const taupath::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
