// Copyright 2026 The qrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace qrec {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input bytes (PGM, CSV or JSON). Carries the byte offset of the
/// first offending position when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  explicit ParseError(const std::string& what)
      : Error(what), byte_offset_(no_offset) {}

  static constexpr std::size_t no_offset = static_cast<std::size_t>(-1);

  /// Offset into the input where parsing failed, or `no_offset`.
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A parameter, flag or configuration value outside its documented range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Attempt to normalize an all-zero (or numerically vanished) vector.
class ZeroVectorError : public Error {
 public:
  using Error::Error;
};

/// Operands with incompatible dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
  DimensionMismatch(std::size_t a, std::size_t b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " +
              std::to_string(b)) {}
};

/// Raised by orthogonalization when a residual norm falls below the
/// dependence tolerance. `index` is the offending input position.
class LinearDependenceError : public Error {
 public:
  explicit LinearDependenceError(std::size_t index)
      : Error("input state " + std::to_string(index) +
              " is linearly dependent on its predecessors"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A type invariant failed to hold: non-unit norms, non-orthonormal sets,
/// non-unitary rotations, or a persisted file that no longer satisfies them.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qrec
