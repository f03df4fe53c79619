// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace taupath {

/// Immutable expression tree over real constants, species counts and named
/// parameters. Species and parameters are referenced by index; names are only
/// needed for printing.
///
/// Powers are stored in the generalized form `a^b * ln(a)^n` (n = 0 for a
/// plain power). Derivatives of `x^a` with respect to `a` produce the n = 1
/// form, whose value at a = 0 base and positive exponent is the limit 0.
class Expression {
 public:
  enum class Kind : std::uint8_t {
    kConstant,
    kSpecies,
    kParameter,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kPowLog,
  };

  struct Node {
    Kind kind;
    double value = 0.0;        // kConstant
    std::uint32_t index = 0;   // kSpecies, kParameter
    std::uint32_t log_power = 0;  // kPowLog
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  /// The constant 0.
  Expression();

  static Expression constant(double value);
  static Expression species(std::uint32_t index);
  static Expression parameter(std::uint32_t index);
  /// `base^exponent * ln(base)^log_power`.
  static Expression pow_log(const Expression& base, const Expression& exponent,
                            std::uint32_t log_power);
  static Expression pow(const Expression& base, const Expression& exponent) {
    return pow_log(base, exponent, 0);
  }

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

  Kind kind() const noexcept { return node_->kind; }
  const Node& node() const noexcept { return *node_; }
  bool is_constant() const noexcept { return node_->kind == Kind::kConstant; }
  /// True for a constant with exactly this value.
  bool is_constant(double value) const noexcept;

  bool depends_on_parameter(std::uint32_t index) const;
  bool depends_on_species() const;

  /// Tree-walking evaluation; throws EvalError on division by zero or on a
  /// power with zero base and non-positive exponent.
  double evaluate(std::span<const std::int64_t> state,
                  std::span<const double> parameters) const;

  /// Symbolic partial derivative with respect to parameter `index`. The
  /// result is simplified (constant folding, additive and multiplicative
  /// identities).
  Expression derivative(std::uint32_t parameter_index) const;

  /// Infix rendering using the given names. Plain powers print as `a^b`, so
  /// expressions built by the parser round-trip through `parse_expression`.
  std::string to_string(std::span<const std::string> species_names,
                        std::span<const std::string> parameter_names) const;

 private:
  explicit Expression(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Postfix bytecode form of an Expression for evaluation in simulation inner
/// loops. Semantics are identical to Expression::evaluate.
class CompiledExpression {
 public:
  CompiledExpression() = default;
  explicit CompiledExpression(const Expression& expr);

  double operator()(const std::int64_t* state, const double* parameters) const;

  bool empty() const noexcept { return code_.empty(); }

 private:
  enum class OpCode : std::uint8_t {
    kPushConst,
    kPushSpecies,
    kPushParam,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kPowLog,
  };
  struct Instruction {
    OpCode op;
    std::uint32_t index;
    double value;
  };

  void emit(const Expression::Node& node);

  std::vector<Instruction> code_;
  std::size_t max_depth_ = 0;
};

/// Evaluates `base^exponent * ln(base)^log_power` with the zero-base
/// convention (0 for positive exponent, EvalError otherwise).
double pow_log_value(double base, double exponent, std::uint32_t log_power);

}  // namespace taupath
