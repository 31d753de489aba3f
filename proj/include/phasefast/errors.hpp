// Copyright 2026 The phasefast Authors. All Rights Reserved.
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

namespace phasefast {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes; see cli.hpp.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed StftConfig (window too short, odd fft length, hop > window, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The squared-window envelope vanishes somewhere, so synthesis has no inverse.
class NonInvertibleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidParamError : public Error {
 public:
  using Error::Error;
};

// Shape or length mismatch between arguments, empty signals.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A metric is undefined for its input (e.g. zero reference energy).
class MetricError : public Error {
 public:
  using Error::Error;
};

class ObserverError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : IoError(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedFormatError : public IoError {
 public:
  UnsupportedFormatError(const std::string& field, const std::string& what)
      : IoError("unsupported " + field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace phasefast
