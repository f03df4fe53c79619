// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
//
// Line-oriented model format:
//
//   species: A B C
//   param k1 = 0.5
//   reaction: A + 2 B -> C @ k1*A*B*(B - 1)/2
//   observable: C
//   init: 10 20 0
//
// `#` starts a comment. Declarations may appear in any order.
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>

#include "taupath/error.hpp"
#include "taupath/model.hpp"

namespace taupath {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Recursive-descent parser for propensity and observable expressions.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | '+' unary | power
///   power   := primary ('^' unary)?
///   primary := number | identifier | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t line, std::size_t column0,
                   std::span<const std::string> species,
                   std::span<const std::string> params)
      : text_(text), line_(line), col0_(column0), species_(species),
        params_(params) {}

  Expression parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected an expression");
    Expression e = expr();
    skip_ws();
    if (pos_ < text_.size())
      fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ModelError(msg, line_, col0_ + pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return Expression::pow(base, unary());
    return base;
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (is_ident_start(c)) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    return Expression::constant(v);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    for (std::size_t i = 0; i < species_.size(); ++i)
      if (species_[i] == name)
        return Expression::species(static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i] == name)
        return Expression::parameter(static_cast<std::uint32_t>(i));
    pos_ = start;
    fail("undeclared identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t col0_;
  std::span<const std::string> species_;
  std::span<const std::string> params_;
  std::size_t pos_ = 0;
};

struct Line {
  std::size_t number;
  std::string_view text;  // comment stripped
  std::size_t offset;     // column of text[0] minus one
};

struct Directive {
  Line line;
  std::string_view keyword;
  std::string_view body;
  std::size_t body_column;  // 1-based column of body[0]
};

Directive split_directive(const Line& l) {
  std::string_view t = l.text;
  std::size_t i = 0;
  while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  const std::size_t kstart = i;
  while (i < t.size() && is_ident_char(t[i])) ++i;
  std::string_view keyword = t.substr(kstart, i - kstart);
  while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  if (keyword != "param") {
    if (i >= t.size() || t[i] != ':')
      throw ModelError("expected ':' after '" + std::string(keyword) + "'",
                       l.number, l.offset + i + 1);
    ++i;
  }
  return {l, keyword, t.substr(i), l.offset + i + 1};
}

std::vector<std::pair<std::string_view, std::size_t>> split_words(
    std::string_view body, std::size_t column) {
  std::vector<std::pair<std::string_view, std::size_t>> words;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    const std::size_t s = i;
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i > s) words.emplace_back(body.substr(s, i - s), column + s);
  }
  return words;
}

void check_identifier(std::string_view word, std::size_t line, std::size_t col) {
  if (word.empty() || !is_ident_start(word.front()))
    throw ModelError("invalid identifier '" + std::string(word) + "'", line, col);
  for (char c : word)
    if (!is_ident_char(c))
      throw ModelError("invalid identifier '" + std::string(word) + "'", line, col);
}

std::vector<SpeciesTerm> parse_side(std::string_view side, std::size_t line,
                                    std::size_t column,
                                    const std::vector<std::string>& species) {
  std::vector<SpeciesTerm> terms;
  if (trim(side).empty()) return terms;
  std::size_t start = 0;
  for (;;) {
    const std::size_t plus = side.find('+', start);
    const std::string_view raw =
        side.substr(start, plus == std::string_view::npos ? side.npos : plus - start);
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead])))
      ++lead;
    const std::size_t col = column + start + lead;
    std::string_view term = trim(raw);
    if (term.empty()) throw ModelError("empty species term", line, col);

    std::int64_t multiplicity = 1;
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    if (i > 0) {
      auto [p, ec] = std::from_chars(term.data(), term.data() + i, multiplicity);
      if (ec != std::errc() || multiplicity <= 0)
        throw ModelError("invalid multiplicity", line, col);
      term.remove_prefix(i);
      term = trim(term);
      if (!term.empty() && term.front() == '*') term = trim(term.substr(1));
    }
    check_identifier(term, line, col);
    auto it = std::find(species.begin(), species.end(), term);
    if (it == species.end())
      throw ModelError("undeclared identifier '" + std::string(term) + "'", line, col);
    terms.push_back({static_cast<std::uint32_t>(it - species.begin()), multiplicity});
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return terms;
}

}  // namespace

Expression parse_expression(std::string_view text,
                            std::span<const std::string> species,
                            std::span<const std::string> parameters) {
  return ExpressionParser(text, 0, 1, species, parameters).parse();
}

ReactionNetwork parse_model(std::string_view text) {
  std::vector<Line> lines;
  {
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view l = text.substr(start, end - start);
      ++number;
      if (auto hash = l.find('#'); hash != std::string_view::npos)
        l = l.substr(0, hash);
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      if (!trim(l).empty()) lines.push_back({number, l, 0});
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  std::vector<Directive> directives;
  for (const auto& l : lines) directives.push_back(split_directive(l));

  // Pass 1: declarations.
  std::vector<std::string> species;
  std::vector<std::string> params;
  std::vector<double> values;
  std::map<std::string, std::size_t, std::less<>> declared;
  auto declare = [&](std::string_view name, std::size_t line, std::size_t col,
                     const char* what) {
    check_identifier(name, line, col);
    if (!declared.emplace(std::string(name), line).second)
      throw ModelError(std::string("duplicate ") + what + " '" +
                           std::string(name) + "'",
                       line, col);
  };
  for (const auto& d : directives) {
    if (d.keyword == "species") {
      for (auto [w, col] : split_words(d.body, d.body_column)) {
        declare(w, d.line.number, col, "species");
        species.emplace_back(w);
      }
    } else if (d.keyword == "param") {
      const std::size_t eq = d.body.find('=');
      if (eq == std::string_view::npos)
        throw ModelError("expected '=' in parameter declaration", d.line.number,
                         d.body_column);
      std::string_view name = d.body.substr(0, eq);
      std::size_t lead = 0;
      while (lead < name.size() && std::isspace(static_cast<unsigned char>(name[lead])))
        ++lead;
      name = trim(name);
      declare(name, d.line.number, d.body_column + lead, "parameter");
      const std::string value(trim(d.body.substr(eq + 1)));
      char* end = nullptr;
      const double v = std::strtod(value.c_str(), &end);
      if (value.empty() || end != value.c_str() + value.size())
        throw ModelError("malformed parameter value '" + value + "'",
                         d.line.number, d.body_column + eq + 1);
      params.emplace_back(name);
      values.push_back(v);
    } else if (d.keyword != "reaction" && d.keyword != "observable" &&
               d.keyword != "init") {
      throw ModelError("unknown directive '" + std::string(d.keyword) + "'",
                       d.line.number, d.line.offset + 1);
    }
  }

  // Pass 2: reactions, observable, initial state.
  std::vector<Reaction> reactions;
  std::optional<Expression> observable;
  State init;
  for (const auto& d : directives) {
    const std::size_t ln = d.line.number;
    if (d.keyword == "reaction") {
      const std::size_t at = d.body.find('@');
      if (at == std::string_view::npos)
        throw ModelError("expected '@' before the propensity", ln, d.body_column);
      const std::string_view scheme = d.body.substr(0, at);
      const std::size_t arrow = scheme.find("->");
      if (arrow == std::string_view::npos)
        throw ModelError("expected '->' in reaction", ln, d.body_column);
      Reaction r;
      r.reactants = parse_side(scheme.substr(0, arrow), ln, d.body_column, species);
      r.products = parse_side(scheme.substr(arrow + 2), ln,
                              d.body_column + arrow + 2, species);
      r.propensity = ExpressionParser(d.body.substr(at + 1), ln,
                                      d.body_column + at + 1, species, params)
                         .parse();
      reactions.push_back(std::move(r));
    } else if (d.keyword == "observable") {
      if (observable)
        throw ModelError("observable declared twice", ln, d.line.offset + 1);
      observable = ExpressionParser(d.body, ln, d.body_column, species, params).parse();
    } else if (d.keyword == "init") {
      for (auto [w, col] : split_words(d.body, d.body_column)) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || p != w.data() + w.size() || v < 0)
          throw ModelError("invalid initial count '" + std::string(w) + "'", ln, col);
        init.push_back(v);
      }
    }
  }
  if (species.empty()) throw ModelError("network declares no species");
  if (reactions.empty()) throw ModelError("network declares no reactions");
  if (!observable) throw ModelError("missing observable");
  if (!init.empty() && init.size() != species.size())
    throw ModelError("init lists " + std::to_string(init.size()) +
                     " counts for " + std::to_string(species.size()) + " species");

  return ReactionNetwork(std::move(species), std::move(params), std::move(values),
                         std::move(reactions), std::move(*observable),
                         std::move(init));
}

}  // namespace taupath
