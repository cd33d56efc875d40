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
#include <string>
#include <utility>
#include <vector>

#include "qrec/errors.hpp"
#include "qrec/recognition.hpp"
#include "qrec/rng.hpp"
#include "qrec/state.hpp"

namespace qrec {

/// Tolerance on orthonormality, unitarity and the rotation mapping.
inline constexpr double kOrthoTolerance = 1e-10;

/// Default residual-norm threshold below which an input is reported as
/// linearly dependent.
inline constexpr double kDependenceTolerance = 1e-8;

namespace detail {

inline Complex cdot(std::span<const Complex> x, std::span<const Complex> y) {
  // sum x_i * conj(y_i)
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

// Plain bilinear dot sum x_i * y_i (no conjugation); U rows already carry
// the conjugates, so U v lands directly on this.
inline Complex cdot0(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double cnorm(std::span<const Complex> x) {
  double s = 0;
  for (const Complex& v : x) s += std::norm(v);
  return std::sqrt(s);
}

// r -= <r, u> u for unit u. Two sweeps of these per vector keep the basis
// orthogonal to ~machine precision even near the dependence threshold,
// where a single modified Gram-Schmidt pass degrades as eps * kappa.
inline void project_out(std::vector<Complex>& r, std::span<const Complex> u) {
  const Complex c = cdot(r, u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * u[i];
}

}  // namespace detail

/// Modified Gram-Schmidt over the input order, with one re-orthogonalization
/// pass per vector. Output spans the same subspace; an input whose residual
/// norm drops below `tol` raises LinearDependenceError with its index.
/// Already-orthonormal inputs come back unchanged up to rounding.
inline std::vector<QuantumState> orthogonalize(
    std::span<const QuantumState> images, double tol = kDependenceTolerance) {
  if (images.empty()) throw ConfigError("nothing to orthogonalize");
  if (!(tol > 0.0)) throw ConfigError("dependence tolerance must be > 0");
  const std::size_t n = images[0].dim();
  for (const QuantumState& s : images)
    if (s.dim() != n) throw DimensionMismatch(n, s.dim());
  if (images.size() > n)
    throw ConfigError("cannot orthogonalize more states than the dimension");

  std::vector<std::vector<Complex>> basis;
  basis.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<Complex> r(images[i].amplitudes().begin(),
                           images[i].amplitudes().end());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) detail::project_out(r, b);
    const double rn = detail::cnorm(r);
    if (rn < tol) throw LinearDependenceError(i);
    const double inv = 1.0 / rn;
    for (Complex& x : r) x *= inv;
    basis.push_back(std::move(r));
  }

  std::vector<QuantumState> out;
  out.reserve(basis.size());
  for (auto& b : basis) out.push_back(QuantumState(std::move(b)));
  return out;
}

/// Dense complex matrix, row-major. Only ever built unitary here.
class Unitary {
 public:
  Unitary(std::size_t dim, std::vector<Complex> row_major)
      : dim_(dim), elems_(std::move(row_major)) {
    if (dim_ == 0) throw ConfigError("Unitary requires dimension >= 1");
    if (elems_.size() != dim_ * dim_)
      throw ConfigError("Unitary element count does not match dimension");
  }

  std::size_t dim() const noexcept { return dim_; }
  const Complex& at(std::size_t row, std::size_t col) const {
    return elems_[row * dim_ + col];
  }
  std::span<const Complex> row(std::size_t r) const {
    return std::span<const Complex>(elems_).subspan(r * dim_, dim_);
  }
  std::span<const Complex> elements() const noexcept { return elems_; }

  std::vector<Complex> apply(std::span<const Complex> v) const {
    if (v.size() != dim_) throw DimensionMismatch(dim_, v.size());
    std::vector<Complex> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) out[r] = detail::cdot0(row(r), v);
    return out;
  }

  /// max_{ij} |(U^dag U - I)_{ij}|. Quadratic in memory, cubic in time.
  double unitarity_residual() const {
    double worst = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i; j < dim_; ++j) {
        Complex s(0.0, 0.0);
        for (std::size_t r = 0; r < dim_; ++r)
          s += std::conj(at(r, i)) * at(r, j);
        if (i == j) s -= Complex(1.0, 0.0);
        worst = std::max(worst, std::abs(s));
      }
    }
    return worst;
  }

 private:
  std::size_t dim_;
  std::vector<Complex> elems_;
};

/// Builds the rotation that sends the i-th stored state to the i-th basis
/// vector: rows 0..k-1 are the conjugated stored states, and the remaining
/// rows complete the basis by Gram-Schmidt over the canonical basis vectors
/// (candidates whose residual falls below kDependenceTolerance are skipped).
inline Unitary build_rotation(std::span<const QuantumState> ortho_states,
                              std::size_t dim) {
  const std::size_t k = ortho_states.size();
  if (k == 0) throw ConfigError("rotation requires >= 1 stored state");
  if (k > dim)
    throw ConfigError("more stored states than the dimension allows");
  for (const QuantumState& s : ortho_states)
    if (s.dim() != dim) throw DimensionMismatch(dim, s.dim());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      const double g = std::abs(inner(ortho_states[i], ortho_states[j]) -
                                (i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0)));
      if (g > kOrthoTolerance)
        throw InvariantViolation("rotation input is not orthonormal");
    }

  std::vector<std::vector<Complex>> rows;
  rows.reserve(dim);
  for (const QuantumState& s : ortho_states) {
    std::vector<Complex> r;
    r.reserve(dim);
    for (const Complex& a : s.amplitudes()) r.push_back(std::conj(a));
    rows.push_back(std::move(r));
  }

  for (std::size_t cand = 0; cand < dim && rows.size() < dim; ++cand) {
    std::vector<Complex> r(dim, Complex(0.0, 0.0));
    r[cand] = Complex(1.0, 0.0);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : rows) detail::project_out(r, u);
    const double rn = detail::cnorm(r);
    if (rn < kDependenceTolerance) continue;
    const double inv = 1.0 / rn;
    for (Complex& x : r) x *= inv;
    rows.push_back(std::move(r));
  }
  if (rows.size() != dim)
    throw InvariantViolation("basis completion failed");

  std::vector<Complex> flat;
  flat.reserve(dim * dim);
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return Unitary(dim, std::move(flat));
}

/// Stored set for the single-measurement recognizer: the orthogonalized
/// states, the rotation that maps them onto the first k basis vectors, and
/// (when built in-process) the original states for distortion reporting.
class OrthoMemory {
 public:
  OrthoMemory(std::size_t dim, std::vector<QuantumState> ortho_states,
              Unitary rotation, std::vector<std::string> labels,
              std::vector<QuantumState> originals = {})
      : dim_(dim),
        ortho_(std::move(ortho_states)),
        rotation_(std::move(rotation)),
        labels_(std::move(labels)),
        originals_(std::move(originals)) {
    validate();
  }

  /// Orthogonalizes `images` in order, fixes each result's canonical phase
  /// (so serialization round-trips exactly) and builds the rotation.
  static OrthoMemory build(std::span<const QuantumState> images,
                           std::vector<std::string> labels,
                           double tol = kDependenceTolerance) {
    if (labels.size() != images.size())
      throw ConfigError("one label per stored image required");
    std::vector<QuantumState> ortho = orthogonalize(images, tol);
    for (QuantumState& s : ortho) s = canonical_phase(s);
    Unitary rot = build_rotation(ortho, images[0].dim());
    return OrthoMemory(images[0].dim(), std::move(ortho), std::move(rot),
                       std::move(labels),
                       std::vector<QuantumState>(images.begin(), images.end()));
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t stored_count() const noexcept { return ortho_.size(); }
  std::span<const QuantumState> ortho_states() const noexcept { return ortho_; }
  const Unitary& rotation() const noexcept { return rotation_; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::span<const QuantumState> originals() const noexcept { return originals_; }

  /// Fidelity of each original against its orthogonalized replacement;
  /// empty when the originals were not kept (e.g. after deserialization).
  std::vector<double> distortions() const {
    std::vector<double> out;
    out.reserve(originals_.size());
    for (std::size_t i = 0; i < originals_.size(); ++i)
      out.push_back(fidelity(originals_[i], ortho_[i]));
    return out;
  }

  /// Re-checks the three structural invariants at kOrthoTolerance:
  /// orthonormality of the stored states, unitarity of the rotation, and
  /// the rotation mapping each stored state onto its basis vector.
  void validate() const {
    const std::size_t k = ortho_.size();
    if (k == 0) throw InvariantViolation("memory holds no states");
    if (k > dim_) throw InvariantViolation("memory holds more states than dim");
    if (labels_.size() != k)
      throw InvariantViolation("memory labels do not match stored states");
    if (!originals_.empty() && originals_.size() != k)
      throw InvariantViolation("memory originals do not match stored states");
    if (rotation_.dim() != dim_)
      throw InvariantViolation("rotation dimension does not match memory");
    for (const QuantumState& s : ortho_)
      if (s.dim() != dim_)
        throw InvariantViolation("stored state dimension does not match memory");
    for (const QuantumState& s : originals_)
      if (s.dim() != dim_)
        throw InvariantViolation("original state dimension does not match memory");

    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const Complex g = inner(ortho_[i], ortho_[j]);
        const Complex want = i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        if (std::abs(g - want) > kOrthoTolerance)
          throw InvariantViolation("stored states are not orthonormal");
      }

    if (rotation_.unitarity_residual() > kOrthoTolerance)
      throw InvariantViolation("rotation is not unitary");

    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<Complex> phi = rotation_.apply(ortho_[i].amplitudes());
      for (std::size_t j = 0; j < dim_; ++j) {
        const Complex want = j == i ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        if (std::abs(phi[j] - want) > kOrthoTolerance)
          throw InvariantViolation(
              "rotation does not map stored states onto basis vectors");
      }
    }
  }

 private:
  std::size_t dim_;
  std::vector<QuantumState> ortho_;
  Unitary rotation_;
  std::vector<std::string> labels_;
  std::vector<QuantumState> originals_;
};

/// Probability of each measurement outcome for `input`: |(U_r input)_i|^2.
/// Outcomes below stored_count() identify stored states; the rest form the
/// rejection band.
inline std::vector<double> outcome_probabilities(const QuantumState& input,
                                                 const OrthoMemory& memory) {
  if (input.dim() != memory.dim())
    throw DimensionMismatch(input.dim(), memory.dim());
  const std::vector<Complex> phi = memory.rotation().apply(input.amplitudes());
  std::vector<double> probs(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) probs[i] = std::norm(phi[i]);
  return probs;
}

namespace detail {

inline std::size_t sample_index(std::span<const double> probs, RngStream& g) {
  const double u = uniform01(g);
  double cum = 0;
  std::size_t last_positive = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
    cum += probs[i];
    if (u < cum) return i;
  }
  // Rounding can leave cum a few ulp short of 1; attribute the sliver to
  // the last outcome that had any weight.
  if (last_positive == probs.size())
    throw InvariantViolation("cannot sample from an all-zero distribution");
  return last_positive;
}

}  // namespace detail

/// One projective measurement of `input` in the rotated basis.
/// Deterministic given the stream state.
inline std::size_t measure_in_basis(const QuantumState& input,
                                    const OrthoMemory& memory, RngStream& g) {
  const std::vector<double> probs = outcome_probabilities(input, memory);
  return detail::sample_index(probs, g);
}

/// Single-shot recognition: one measurement, accepted iff the outcome lands
/// on a stored state. `epsilon` is carried through for reporting only.
inline RecognitionResult recognize_single_shot(const OrthoMemory& memory,
                                               const QuantumState& input,
                                               RngStream& g,
                                               double epsilon = 0.1) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0, 1)");
  const std::vector<double> probs = outcome_probabilities(input, memory);
  const std::size_t outcome = detail::sample_index(probs, g);
  RecognitionResult r;
  r.epsilon = epsilon;
  if (outcome < memory.stored_count()) {
    r.best_index = outcome;
    r.score = std::min(1.0, probs[outcome]);
    r.accepted = true;
  } else {
    r.best_index = std::nullopt;
    r.score = 0.0;
    r.accepted = false;
  }
  return r;
}

}  // namespace qrec
