// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taupath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent model description. Carries a 1-based source
/// position when the error originates in the model-file parser (0 otherwise).
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what, std::size_t line = 0,
                      std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Expression or propensity evaluation failure (division by zero, negative
/// propensity, non-finite value, 0^a with a <= 0).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Invalid estimator or scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace taupath
