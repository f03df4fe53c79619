// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/expression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "taupath/error.hpp"

namespace taupath {

namespace {

using Node = Expression::Node;
using Kind = Expression::Kind;

std::shared_ptr<const Node> make_node(Kind kind, std::shared_ptr<const Node> lhs,
                                      std::shared_ptr<const Node> rhs,
                                      std::uint32_t log_power = 0) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  node->log_power = log_power;
  return node;
}

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::kAdd:
    case Kind::kSub:
      return 1;
    case Kind::kMul:
    case Kind::kDiv:
      return 2;
    case Kind::kNeg:
      return 3;
    case Kind::kPowLog:
      return n.log_power == 0 ? 4 : 5;
    case Kind::kConstant:
      return n.value < 0 ? 3 : 5;
    default:
      return 5;
  }
}

void render(const Node& n, std::span<const std::string> species,
            std::span<const std::string> params, std::string& out) {
  auto child = [&](const Node& c, bool wrap) {
    if (wrap) out += '(';
    render(c, species, params, out);
    if (wrap) out += ')';
  };
  switch (n.kind) {
    case Kind::kConstant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Kind::kSpecies:
      out += n.index < species.size() ? species[n.index]
                                      : "x" + std::to_string(n.index);
      return;
    case Kind::kParameter:
      out += n.index < params.size() ? params[n.index]
                                     : "p" + std::to_string(n.index);
      return;
    case Kind::kNeg:
      out += '-';
      child(*n.lhs, precedence(*n.lhs) < 4);
      return;
    case Kind::kPowLog:
      if (n.log_power != 0) {
        out += "powlog(";
        render(*n.lhs, species, params, out);
        out += ", ";
        render(*n.rhs, species, params, out);
        out += ", " + std::to_string(n.log_power) + ")";
        return;
      }
      child(*n.lhs, precedence(*n.lhs) <= 4);
      out += '^';
      child(*n.rhs, precedence(*n.rhs) <= 4);
      return;
    default:
      break;
  }
  const int p = precedence(n);
  const char* op = n.kind == Kind::kAdd   ? " + "
                   : n.kind == Kind::kSub ? " - "
                   : n.kind == Kind::kMul ? "*"
                                          : "/";
  child(*n.lhs, precedence(*n.lhs) < p);
  out += op;
  child(*n.rhs, precedence(*n.rhs) <= p);
}

double eval_node(const Node& n, std::span<const std::int64_t> x,
                 std::span<const double> p) {
  switch (n.kind) {
    case Kind::kConstant:
      return n.value;
    case Kind::kSpecies:
      return static_cast<double>(x[n.index]);
    case Kind::kParameter:
      return p[n.index];
    case Kind::kAdd:
      return eval_node(*n.lhs, x, p) + eval_node(*n.rhs, x, p);
    case Kind::kSub:
      return eval_node(*n.lhs, x, p) - eval_node(*n.rhs, x, p);
    case Kind::kMul:
      return eval_node(*n.lhs, x, p) * eval_node(*n.rhs, x, p);
    case Kind::kDiv: {
      const double num = eval_node(*n.lhs, x, p);
      const double den = eval_node(*n.rhs, x, p);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case Kind::kNeg:
      return -eval_node(*n.lhs, x, p);
    case Kind::kPowLog:
      return pow_log_value(eval_node(*n.lhs, x, p), eval_node(*n.rhs, x, p),
                           n.log_power);
  }
  return 0.0;
}

bool any_node(const Node& n, auto&& pred) {
  if (pred(n)) return true;
  if (n.lhs && any_node(*n.lhs, pred)) return true;
  if (n.rhs && any_node(*n.rhs, pred)) return true;
  return false;
}

}  // namespace

double pow_log_value(double base, double exponent, std::uint32_t log_power) {
  if (base == 0.0) {
    if (exponent > 0.0) return 0.0;
    throw EvalError("zero raised to a non-positive power");
  }
  double v = std::pow(base, exponent);
  if (log_power != 0) {
    const double l = std::log(base);
    for (std::uint32_t i = 0; i < log_power; ++i) v *= l;
  }
  return v;
}

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::constant(double value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kConstant;
  node->value = value;
  return Expression(std::move(node));
}

Expression Expression::species(std::uint32_t index) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kSpecies;
  node->index = index;
  return Expression(std::move(node));
}

Expression Expression::parameter(std::uint32_t index) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kParameter;
  node->index = index;
  return Expression(std::move(node));
}

bool Expression::is_constant(double value) const noexcept {
  return node_->kind == Kind::kConstant && node_->value == value;
}

Expression Expression::pow_log(const Expression& base, const Expression& exponent,
                               std::uint32_t log_power) {
  if (base.is_constant() && exponent.is_constant()) {
    // Fold only when the value is well defined; otherwise keep the node so
    // the error surfaces at evaluation time.
    const double b = base.node_->value;
    const double e = exponent.node_->value;
    if (b > 0.0 || (b == 0.0 && e > 0.0) || (b < 0.0 && log_power == 0)) {
      const double v = pow_log_value(b, e, log_power);
      if (std::isfinite(v)) return constant(v);
    }
  }
  if (log_power == 0 && exponent.is_constant(1.0)) return base;
  return Expression(
      make_node(Kind::kPowLog, base.node_, exponent.node_, log_power));
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.node_->value + b.node_->value);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expression(make_node(Kind::kAdd, a.node_, b.node_));
}

Expression operator-(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.node_->value - b.node_->value);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expression(make_node(Kind::kSub, a.node_, b.node_));
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.node_->value * b.node_->value);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expression::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return Expression(make_node(Kind::kMul, a.node_, b.node_));
}

Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant() && b.node_->value != 0.0)
    return Expression::constant(a.node_->value / b.node_->value);
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return a;
  return Expression(make_node(Kind::kDiv, a.node_, b.node_));
}

Expression operator-(const Expression& a) {
  if (a.is_constant()) return Expression::constant(-a.node_->value);
  if (a.kind() == Kind::kNeg) return Expression(a.node_->lhs);
  return Expression(make_node(Kind::kNeg, a.node_, nullptr));
}

bool Expression::depends_on_parameter(std::uint32_t index) const {
  return any_node(*node_, [index](const Node& n) {
    return n.kind == Kind::kParameter && n.index == index;
  });
}

bool Expression::depends_on_species() const {
  return any_node(*node_,
                  [](const Node& n) { return n.kind == Kind::kSpecies; });
}

double Expression::evaluate(std::span<const std::int64_t> state,
                            std::span<const double> parameters) const {
  return eval_node(*node_, state, parameters);
}

Expression Expression::derivative(std::uint32_t j) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConstant:
    case Kind::kSpecies:
      return constant(0.0);
    case Kind::kParameter:
      return constant(n.index == j ? 1.0 : 0.0);
    default:
      break;
  }
  const Expression a(n.lhs);
  const Expression da = a.derivative(j);
  switch (n.kind) {
    case Kind::kNeg:
      return -da;
    case Kind::kPowLog: {
      // d(a^b ln^m a) = a^b ln^{m+1} a * db
      //               + (b a^{b-1} ln^m a + m a^{b-1} ln^{m-1} a) * da
      const Expression b(n.rhs);
      const Expression db = b.derivative(j);
      const std::uint32_t m = n.log_power;
      Expression result = pow_log(a, b, m + 1) * db;
      if (!da.is_constant(0.0)) {
        const Expression bm1 = b - constant(1.0);
        Expression inner = (m == 0 && b.is_constant(1.0))
                               ? constant(1.0)
                               : b * pow_log(a, bm1, m);
        if (m > 0) inner = inner + constant(m) * pow_log(a, bm1, m - 1);
        result = result + inner * da;
      }
      return result;
    }
    default:
      break;
  }
  const Expression b(n.rhs);
  const Expression db = b.derivative(j);
  switch (n.kind) {
    case Kind::kAdd:
      return da + db;
    case Kind::kSub:
      return da - db;
    case Kind::kMul:
      return da * b + a * db;
    case Kind::kDiv:
      if (db.is_constant(0.0)) return da / b;
      return da / b - (a * db) / (b * b);
    default:
      return constant(0.0);
  }
}

std::string Expression::to_string(std::span<const std::string> species_names,
                                  std::span<const std::string> parameter_names) const {
  std::string out;
  render(*node_, species_names, parameter_names, out);
  return out;
}

CompiledExpression::CompiledExpression(const Expression& expr) {
  emit(expr.node());
  std::size_t depth = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case OpCode::kPushConst:
      case OpCode::kPushSpecies:
      case OpCode::kPushParam:
        ++depth;
        break;
      case OpCode::kNeg:
        break;
      default:
        --depth;
        break;
    }
    max_depth_ = std::max(max_depth_, depth);
  }
}

void CompiledExpression::emit(const Expression::Node& n) {
  switch (n.kind) {
    case Kind::kConstant:
      code_.push_back({OpCode::kPushConst, 0, n.value});
      return;
    case Kind::kSpecies:
      code_.push_back({OpCode::kPushSpecies, n.index, 0.0});
      return;
    case Kind::kParameter:
      code_.push_back({OpCode::kPushParam, n.index, 0.0});
      return;
    case Kind::kNeg:
      emit(*n.lhs);
      code_.push_back({OpCode::kNeg, 0, 0.0});
      return;
    default:
      break;
  }
  emit(*n.lhs);
  emit(*n.rhs);
  switch (n.kind) {
    case Kind::kAdd:
      code_.push_back({OpCode::kAdd, 0, 0.0});
      break;
    case Kind::kSub:
      code_.push_back({OpCode::kSub, 0, 0.0});
      break;
    case Kind::kMul:
      code_.push_back({OpCode::kMul, 0, 0.0});
      break;
    case Kind::kDiv:
      code_.push_back({OpCode::kDiv, 0, 0.0});
      break;
    case Kind::kPowLog:
      code_.push_back({OpCode::kPowLog, n.log_power, 0.0});
      break;
    default:
      break;
  }
}

double CompiledExpression::operator()(const std::int64_t* x,
                                      const double* p) const {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline];
  std::vector<double> heap_stack;
  double* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Instruction& ins : code_) {
    switch (ins.op) {
      case OpCode::kPushConst:
        stack[top++] = ins.value;
        break;
      case OpCode::kPushSpecies:
        stack[top++] = static_cast<double>(x[ins.index]);
        break;
      case OpCode::kPushParam:
        stack[top++] = p[ins.index];
        break;
      case OpCode::kAdd:
        --top;
        stack[top - 1] += stack[top];
        break;
      case OpCode::kSub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case OpCode::kMul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case OpCode::kDiv:
        --top;
        if (stack[top] == 0.0) throw EvalError("division by zero");
        stack[top - 1] /= stack[top];
        break;
      case OpCode::kNeg:
        stack[top - 1] = -stack[top - 1];
        break;
      case OpCode::kPowLog:
        --top;
        stack[top - 1] = pow_log_value(stack[top - 1], stack[top], ins.index);
        break;
    }
  }
  return top == 0 ? 0.0 : stack[0];
}

}  // namespace taupath
