// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taupath/expression.hpp"

namespace taupath {

/// Copy numbers of every species, indexed in declaration order.
using State = std::vector<std::int64_t>;

struct SpeciesTerm {
  std::uint32_t species;
  std::int64_t multiplicity;
};

struct Reaction {
  std::vector<SpeciesTerm> reactants;
  std::vector<SpeciesTerm> products;
  /// Dense state displacement, products minus reactants.
  std::vector<std::int64_t> stoichiometry;
  /// Nonzero entries of `stoichiometry`.
  std::vector<SpeciesTerm> changes;
  Expression propensity;
};

/// Values for every declared parameter of a network, indexed like
/// ReactionNetwork::parameter_names().
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(std::shared_ptr<const std::vector<std::string>> names,
               std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const double* data() const noexcept { return values_.data(); }
  double operator[](std::size_t i) const { return values_[i]; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Value of a named parameter; throws ConfigError when undeclared.
  double get(std::string_view name) const;

  /// Copy with one parameter replaced.
  ParameterSet with(std::size_t index, double value) const;
  ParameterSet with(std::string_view name, double value) const;

  friend bool operator==(const ParameterSet& a, const ParameterSet& b) {
    return a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
  std::vector<double> values_;
};

/// A validated reaction network. Immutable after construction and safe to
/// share between threads.
class ReactionNetwork {
 public:
  ReactionNetwork(std::vector<std::string> species,
                  std::vector<std::string> parameters,
                  std::vector<double> parameter_values,
                  std::vector<Reaction> reactions, Expression observable,
                  State initial_state);

  std::size_t species_count() const noexcept { return species_.size(); }
  std::size_t reaction_count() const noexcept { return reactions_.size(); }
  std::size_t parameter_count() const noexcept { return parameters_->size(); }

  const std::vector<std::string>& species_names() const noexcept {
    return species_;
  }
  const std::vector<std::string>& parameter_names() const noexcept {
    return *parameters_;
  }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  const Reaction& reaction(std::size_t k) const { return reactions_.at(k); }
  const Expression& observable() const noexcept { return observable_; }
  const State& initial_state() const noexcept { return initial_state_; }
  const ParameterSet& default_parameters() const noexcept { return defaults_; }

  std::optional<std::size_t> species_index(std::string_view name) const;
  /// Throws ConfigError when the parameter is not declared.
  std::size_t parameter_index(std::string_view name) const;

  /// lambda_k(x, p). Throws EvalError when the value is negative, non-finite,
  /// or evaluation fails.
  double propensity(std::size_t k, std::span<const std::int64_t> x,
                    const ParameterSet& p) const;
  /// All K propensities at x into `out` (size K), checked as above.
  void propensities(std::span<const std::int64_t> x, const ParameterSet& p,
                    std::span<double> out) const;

  /// Symbolic d lambda_k / d theta, computed once at construction.
  const Expression& propensity_derivative(std::size_t k,
                                          std::size_t parameter) const;
  const Expression& propensity_derivative(std::size_t k,
                                          std::string_view parameter) const {
    return propensity_derivative(k, parameter_index(parameter));
  }
  /// Value of d lambda_k / d theta at (x, p); throws EvalError if non-finite.
  double propensity_derivative_value(std::size_t k, std::size_t parameter,
                                     std::span<const std::int64_t> x,
                                     const ParameterSet& p) const;
  /// True when some propensity depends on the parameter.
  bool is_sensitive_to(std::size_t parameter) const;

  /// f(x); throws EvalError if non-finite.
  double observe(std::span<const std::int64_t> x) const;

 private:
  std::vector<std::string> species_;
  std::shared_ptr<const std::vector<std::string>> parameters_;
  ParameterSet defaults_;
  std::vector<Reaction> reactions_;
  Expression observable_;
  State initial_state_;

  std::vector<CompiledExpression> compiled_propensities_;
  CompiledExpression compiled_observable_;
  // [parameter][reaction]
  std::vector<std::vector<Expression>> derivatives_;
  std::vector<std::vector<CompiledExpression>> compiled_derivatives_;
};

/// Adds `count` firings of `stoichiometry` to x, clamping negative components
/// to zero. Returns true when any component was clamped.
bool apply_stoichiometry(std::span<std::int64_t> x,
                         std::span<const SpeciesTerm> changes,
                         std::int64_t count);
bool apply_stoichiometry(std::span<std::int64_t> x,
                         std::span<const std::int64_t> stoichiometry,
                         std::int64_t count);

/// Parses the line-oriented model format. Throws ModelError with the line and
/// column of the first problem.
ReactionNetwork parse_model(std::string_view text);
ReactionNetwork load_model(const std::string& path);

/// Parses a standalone expression against the given name tables.
Expression parse_expression(std::string_view text,
                            std::span<const std::string> species,
                            std::span<const std::string> parameters);

/// Renders a network back into the model format; `parse_model` of the output
/// reproduces the network.
std::string format_model(const ReactionNetwork& network);

}  // namespace taupath
