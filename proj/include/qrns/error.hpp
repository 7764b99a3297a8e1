// Copyright 2026 The qrns Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrns {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a library call (bad lattice size, mismatched fields, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared while evaluating a nonlinear kernel.
class OverflowError : public Error {
 public:
  OverflowError(std::string stage, const std::string& what)
      : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// The time integration produced a non-finite field.
class BlowUpError : public Error {
 public:
  BlowUpError(double t, std::size_t step, double max_speed, const std::string& what)
      : Error(what), t_(t), step_(step), max_speed_(max_speed) {}
  double time() const noexcept { return t_; }
  std::size_t step() const noexcept { return step_; }
  double max_speed() const noexcept { return max_speed_; }

 private:
  double t_;
  std::size_t step_;
  double max_speed_;
};

/// Configuration text could not be turned into a SimConfig. line() is 0 when
/// the problem is not tied to one line (e.g. a missing key).
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Malformed snapshot or CSV file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrns
