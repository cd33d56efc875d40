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

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qrec/errors.hpp"
#include "qrec/image.hpp"
#include "qrec/rng.hpp"

namespace qrec {

using Complex = std::complex<double>;

/// Pure state of an N-level system: a complex amplitude vector with
/// sum |a_i|^2 = 1 within kNormTolerance.
class QuantumState {
 public:
  explicit QuantumState(std::vector<Complex> amplitudes)
      : amps_(std::move(amplitudes)) {
    if (amps_.empty())
      throw ConfigError("QuantumState requires dimension >= 1");
    double s = 0;
    for (const Complex& a : amps_) s += std::norm(a);
    if (std::abs(s - 1.0) > kNormTolerance)
      throw InvariantViolation("QuantumState amplitudes are not normalized");
  }

  static QuantumState normalized(std::vector<Complex> amplitudes) {
    if (amplitudes.empty())
      throw ConfigError("QuantumState requires dimension >= 1");
    double s = 0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    if (s == 0.0) throw ZeroVectorError("cannot normalize a zero state");
    const double inv = 1.0 / std::sqrt(s);
    for (Complex& a : amplitudes) a *= inv;
    return QuantumState(std::move(amplitudes), unchecked{});
  }

  static QuantumState basis(std::size_t dim, std::size_t index) {
    if (dim == 0) throw ConfigError("QuantumState requires dimension >= 1");
    if (index >= dim) throw ConfigError("basis index out of range");
    std::vector<Complex> a(dim, Complex(0.0, 0.0));
    a[index] = Complex(1.0, 0.0);
    return QuantumState(std::move(a), unchecked{});
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

 private:
  friend QuantumState canonical_phase(const QuantumState&);
  friend QuantumState haar_random_state(std::size_t, std::uint64_t);

  struct unchecked {};
  QuantumState(std::vector<Complex> amplitudes, unchecked)
      : amps_(std::move(amplitudes)) {}

  std::vector<Complex> amps_;
};

/// Lifts a classical unit vector into the state space: amplitudes are the
/// components with zero imaginary part.
inline QuantumState embed(const ImageVector& v) {
  std::vector<Complex> a;
  a.reserve(v.dim());
  for (double x : v.components()) a.emplace_back(x, 0.0);
  return QuantumState(std::move(a));
}

/// Hermitian inner product (a, b) = sum_i a_i * conj(b_i), i.e. <b|a>.
inline Complex inner(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

/// |<b|a>|^2, clamped into [0, 1] against rounding.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::min(1.0, std::norm(inner(a, b)));
}

/// True when a and b agree as rays (equal up to a global phase):
/// 1 - fidelity <= tol.
inline bool ray_equal(const QuantumState& a, const QuantumState& b,
                      double tol) {
  if (!(tol > 0.0)) throw ConfigError("ray_equal requires tol > 0");
  return 1.0 - fidelity(a, b) <= tol;
}

/// Canonical representative of the ray through `a`: the global phase is
/// fixed so that the largest-modulus amplitude (lowest index on ties) is
/// real and positive. Idempotent bit for bit.
inline QuantumState canonical_phase(const QuantumState& a) {
  std::size_t m = 0;
  double best = std::norm(a[0]);
  for (std::size_t i = 1; i < a.dim(); ++i) {
    const double v = std::norm(a[i]);
    if (v > best) {
      best = v;
      m = i;
    }
  }
  const Complex pivot = a[m];
  if (pivot.imag() == 0.0 && pivot.real() > 0.0) return a;
  const Complex phase = std::conj(pivot) / std::abs(pivot);
  std::vector<Complex> out(a.amplitudes().begin(), a.amplitudes().end());
  for (Complex& x : out) x *= phase;
  // Rounding in the rotation can leave the pivot a few ulp off the real
  // axis; pin it so a second call hits the early return bit for bit.
  out[m] = Complex(std::abs(pivot), 0.0);
  return QuantumState(std::move(out), QuantumState::unchecked{});
}

/// Haar-random pure state: i.i.d. complex gaussian amplitudes, normalized.
inline QuantumState haar_random_state(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("haar_random_state requires dim >= 1");
  RngStream g = make_stream(seed);
  std::vector<Complex> a(dim);
  std::normal_distribution<double> dist;
  double s = 0;
  do {
    s = 0;
    for (Complex& x : a) {
      const double re = dist(g);
      const double im = dist(g);
      x = Complex(re, im);
      s += re * re + im * im;
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (Complex& x : a) x *= inv;
  return QuantumState(std::move(a), QuantumState::unchecked{});
}

}  // namespace qrec
