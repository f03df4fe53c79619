// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "taupath/error.hpp"

namespace taupath {

namespace {
std::string with_position(const std::string& what, std::size_t line,
                          std::size_t column) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) +
         ": " + what;
}
}  // namespace

ModelError::ModelError(const std::string& what, std::size_t line,
                       std::size_t column)
    : Error(with_position(what, line, column)), line_(line), column_(column) {}

ParameterSet::ParameterSet(std::shared_ptr<const std::vector<std::string>> names,
                           std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
  if (!names_ || names_->size() != values_.size())
    throw ConfigError("parameter names and values differ in length");
}

std::optional<std::size_t> ParameterSet::index_of(std::string_view name) const {
  if (!names_) return std::nullopt;
  auto it = std::find(names_->begin(), names_->end(), name);
  if (it == names_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_->begin());
}

double ParameterSet::get(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw ConfigError("unknown parameter '" + std::string(name) + "'");
  return values_[*i];
}

ParameterSet ParameterSet::with(std::size_t index, double value) const {
  ParameterSet copy = *this;
  copy.values_.at(index) = value;
  return copy;
}

ParameterSet ParameterSet::with(std::string_view name, double value) const {
  auto i = index_of(name);
  if (!i) throw ConfigError("unknown parameter '" + std::string(name) + "'");
  return with(*i, value);
}

namespace {

void check_indices(const Expression& e, std::size_t d, std::size_t np,
                   const std::string& where) {
  struct Walker {
    std::size_t d, np;
    const std::string& where;
    void operator()(const Expression::Node& node) const {
      if (node.kind == Expression::Kind::kSpecies && node.index >= d)
        throw ModelError(where + ": species index out of range");
      if (node.kind == Expression::Kind::kParameter && node.index >= np)
        throw ModelError(where + ": parameter index out of range");
      if (node.lhs) (*this)(*node.lhs);
      if (node.rhs) (*this)(*node.rhs);
    }
  };
  Walker{d, np, where}(e.node());
}

std::string reaction_label(std::size_t k) {
  return "reaction " + std::to_string(k + 1);
}

}  // namespace

ReactionNetwork::ReactionNetwork(std::vector<std::string> species,
                                 std::vector<std::string> parameters,
                                 std::vector<double> parameter_values,
                                 std::vector<Reaction> reactions,
                                 Expression observable, State initial_state)
    : species_(std::move(species)),
      parameters_(std::make_shared<const std::vector<std::string>>(
          std::move(parameters))),
      reactions_(std::move(reactions)),
      observable_(std::move(observable)),
      initial_state_(std::move(initial_state)) {
  const std::size_t d = species_.size();
  const std::size_t np = parameters_->size();
  if (d == 0) throw ModelError("network declares no species");
  if (reactions_.empty()) throw ModelError("network declares no reactions");

  std::set<std::string> seen;
  for (const auto& s : species_)
    if (!seen.insert(s).second) throw ModelError("duplicate species '" + s + "'");
  for (const auto& p : *parameters_)
    if (!seen.insert(p).second)
      throw ModelError("duplicate identifier '" + p + "'");

  defaults_ = ParameterSet(parameters_, std::move(parameter_values));

  if (initial_state_.empty()) initial_state_.assign(d, 0);
  if (initial_state_.size() != d)
    throw ModelError("initial state has " + std::to_string(initial_state_.size()) +
                     " entries, expected " + std::to_string(d));
  for (auto v : initial_state_)
    if (v < 0) throw ModelError("initial state has a negative count");

  for (std::size_t k = 0; k < reactions_.size(); ++k) {
    Reaction& r = reactions_[k];
    const std::string where = reaction_label(k);
    r.stoichiometry.assign(d, 0);
    for (const auto& t : r.reactants) {
      if (t.species >= d) throw ModelError(where + ": species index out of range");
      r.stoichiometry[t.species] -= t.multiplicity;
    }
    for (const auto& t : r.products) {
      if (t.species >= d) throw ModelError(where + ": species index out of range");
      r.stoichiometry[t.species] += t.multiplicity;
    }
    r.changes.clear();
    for (std::uint32_t i = 0; i < d; ++i)
      if (r.stoichiometry[i] != 0) r.changes.push_back({i, r.stoichiometry[i]});
    check_indices(r.propensity, d, np, where);
    if (r.changes.empty() && r.propensity.depends_on_species())
      throw ModelError(where + ": zero net change with state-dependent propensity");
    compiled_propensities_.emplace_back(r.propensity);
  }
  check_indices(observable_, d, np, "observable");
  compiled_observable_ = CompiledExpression(observable_);

  derivatives_.resize(np);
  compiled_derivatives_.resize(np);
  for (std::uint32_t j = 0; j < np; ++j) {
    for (const auto& r : reactions_) {
      derivatives_[j].push_back(r.propensity.derivative(j));
      compiled_derivatives_[j].emplace_back(derivatives_[j].back());
    }
  }
}

std::optional<std::size_t> ReactionNetwork::species_index(
    std::string_view name) const {
  auto it = std::find(species_.begin(), species_.end(), name);
  if (it == species_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - species_.begin());
}

std::size_t ReactionNetwork::parameter_index(std::string_view name) const {
  auto i = defaults_.index_of(name);
  if (!i) throw ConfigError("unknown parameter '" + std::string(name) + "'");
  return *i;
}

double ReactionNetwork::propensity(std::size_t k, std::span<const std::int64_t> x,
                                   const ParameterSet& p) const {
  double v;
  try {
    v = compiled_propensities_[k](x.data(), p.data());
  } catch (const EvalError& e) {
    throw EvalError(reaction_label(k) + ": " + e.what());
  }
  if (!(v >= 0.0) || !std::isfinite(v)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    throw EvalError(reaction_label(k) + ": invalid propensity " + buf);
  }
  return v;
}

void ReactionNetwork::propensities(std::span<const std::int64_t> x,
                                   const ParameterSet& p,
                                   std::span<double> out) const {
  for (std::size_t k = 0; k < reactions_.size(); ++k) out[k] = propensity(k, x, p);
}

const Expression& ReactionNetwork::propensity_derivative(
    std::size_t k, std::size_t parameter) const {
  return derivatives_.at(parameter).at(k);
}

double ReactionNetwork::propensity_derivative_value(
    std::size_t k, std::size_t parameter, std::span<const std::int64_t> x,
    const ParameterSet& p) const {
  double v;
  try {
    v = compiled_derivatives_[parameter][k](x.data(), p.data());
  } catch (const EvalError& e) {
    throw EvalError(reaction_label(k) + " derivative: " + e.what());
  }
  if (!std::isfinite(v))
    throw EvalError(reaction_label(k) + ": non-finite propensity derivative");
  return v;
}

bool ReactionNetwork::is_sensitive_to(std::size_t parameter) const {
  for (const auto& e : derivatives_.at(parameter))
    if (!e.is_constant(0.0)) return true;
  return false;
}

double ReactionNetwork::observe(std::span<const std::int64_t> x) const {
  const double v = compiled_observable_(x.data(), defaults_.data());
  if (!std::isfinite(v)) throw EvalError("observable is not finite");
  return v;
}

bool apply_stoichiometry(std::span<std::int64_t> x,
                         std::span<const SpeciesTerm> changes,
                         std::int64_t count) {
  if (count == 0) return false;
  bool clamped = false;
  for (const auto& c : changes) {
    std::int64_t& v = x[c.species];
    v += c.multiplicity * count;
    if (v < 0) {
      v = 0;
      clamped = true;
    }
  }
  return clamped;
}

bool apply_stoichiometry(std::span<std::int64_t> x,
                         std::span<const std::int64_t> stoichiometry,
                         std::int64_t count) {
  bool clamped = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += stoichiometry[i] * count;
    if (x[i] < 0) {
      x[i] = 0;
      clamped = true;
    }
  }
  return clamped;
}

ReactionNetwork load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string format_model(const ReactionNetwork& net) {
  const auto& sp = net.species_names();
  const auto& pn = net.parameter_names();
  std::string out = "species:";
  for (const auto& s : sp) out += " " + s;
  out += '\n';
  char buf[64];
  for (std::size_t j = 0; j < pn.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", net.default_parameters()[j]);
    out += "param " + pn[j] + " = " + buf + '\n';
  }
  auto side = [&](const std::vector<SpeciesTerm>& terms) {
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) s += " + ";
      if (terms[i].multiplicity != 1) s += std::to_string(terms[i].multiplicity) + " ";
      s += sp[terms[i].species];
    }
    return s;
  };
  for (const auto& r : net.reactions()) {
    out += "reaction: " + side(r.reactants) + " -> " + side(r.products) + " @ " +
           r.propensity.to_string(sp, pn) + '\n';
  }
  out += "observable: " + net.observable().to_string(sp, pn) + '\n';
  out += "init:";
  for (auto v : net.initial_state()) out += " " + std::to_string(v);
  out += '\n';
  return out;
}

}  // namespace taupath
