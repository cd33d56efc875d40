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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrec/errors.hpp"
#include "qrec/recognition.hpp"
#include "qrec/rng.hpp"
#include "qrec/state.hpp"

namespace qrec {

/// One arm of the recognizer: a memory cell holding a stored state. A probe
/// state passes with probability equal to its fidelity against the stored
/// state, and whatever passes is the stored state again.
struct Filter {
  QuantumState stored;
  std::string label;
};

inline Filter build_filter(const QuantumState& image, std::string label) {
  return Filter{canonical_phase(image), std::move(label)};
}

/// A bank of n filters fed by an input beam of intensity `input_intensity`,
/// split evenly across the arms.
class FilterBank {
 public:
  explicit FilterBank(std::vector<Filter> filters,
                      double input_intensity = 1.0)
      : filters_(std::move(filters)), input_intensity_(input_intensity) {
    if (filters_.empty()) throw ConfigError("filter bank requires >= 1 filter");
    if (!(input_intensity_ > 0.0))
      throw ConfigError("input intensity must be > 0");
    const std::size_t d = filters_.front().stored.dim();
    for (const Filter& f : filters_)
      if (f.stored.dim() != d) throw DimensionMismatch(d, f.stored.dim());
  }

  std::size_t size() const noexcept { return filters_.size(); }
  std::size_t dim() const noexcept { return filters_.front().stored.dim(); }
  double input_intensity() const noexcept { return input_intensity_; }
  std::span<const Filter> filters() const noexcept { return filters_; }
  const Filter& operator[](std::size_t i) const { return filters_[i]; }

 private:
  std::vector<Filter> filters_;
  double input_intensity_;
};

/// Single stochastic pass of `input` through one filter: accepted with
/// probability fidelity(stored, input); the transmitted state is the stored
/// one. Deterministic given the stream state.
inline std::optional<QuantumState> filter_pass(const Filter& filter,
                                               const QuantumState& input,
                                               RngStream& g) {
  if (filter.stored.dim() != input.dim())
    throw DimensionMismatch(filter.stored.dim(), input.dim());
  const double p = fidelity(filter.stored, input);
  if (uniform01(g) < p) return filter.stored;
  return std::nullopt;
}

/// Expected transmitted intensity per arm: I_k = fidelity_k * I0 / n.
inline std::vector<double> split_intensities(const FilterBank& bank,
                                             const QuantumState& input) {
  if (bank.dim() != input.dim())
    throw DimensionMismatch(bank.dim(), input.dim());
  const double per_arm = bank.input_intensity() / static_cast<double>(bank.size());
  std::vector<double> out;
  out.reserve(bank.size());
  for (const Filter& f : bank.filters())
    out.push_back(fidelity(f.stored, input) * per_arm);
  return out;
}

/// Accept counts of a finite-shot experiment.
struct TrialCounts {
  std::uint64_t shots_per_arm = 0;
  std::vector<std::uint64_t> accepts;  // one entry per arm
};

/// Accept count of `shots` Bernoulli trials at probability p, drawn from the
/// (seed, arm) substream. Exposed so per-arm results can be reproduced (or
/// evaluated in a different order) without running the whole bank.
inline std::uint64_t arm_accept_count(double p, std::uint64_t shots,
                                      std::uint64_t seed, std::uint64_t arm) {
  RngStream g = substream(seed, arm);
  std::uint64_t c = 0;
  for (std::uint64_t s = 0; s < shots; ++s)
    if (uniform01(g) < p) ++c;
  return c;
}

/// Sends `shots_per_arm` independent probes down every arm. Arm k draws from
/// the (seed, k) substream, so counts do not depend on evaluation order.
inline TrialCounts run_beam_trials(const FilterBank& bank,
                                   const QuantumState& input,
                                   std::uint64_t shots_per_arm,
                                   std::uint64_t seed) {
  if (shots_per_arm == 0) throw ConfigError("shots_per_arm must be >= 1");
  if (bank.dim() != input.dim())
    throw DimensionMismatch(bank.dim(), input.dim());
  TrialCounts out;
  out.shots_per_arm = shots_per_arm;
  out.accepts.reserve(bank.size());
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const double p = fidelity(bank[k].stored, input);
    out.accepts.push_back(arm_accept_count(p, shots_per_arm, seed, k));
  }
  return out;
}

namespace detail {

inline RecognitionResult argmax_of_rates(const std::vector<double>& rates,
                                         double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0, 1)");
  if (rates.empty()) throw ConfigError("nothing to recognize against");
  std::size_t best = 0;
  for (std::size_t k = 1; k < rates.size(); ++k)
    if (rates[k] > rates[best]) best = k;  // ties keep the lowest index
  RecognitionResult r;
  r.best_index = best;
  r.score = std::min(1.0, std::max(0.0, rates[best]));
  r.epsilon = epsilon;
  r.accepted = r.score > 1.0 - epsilon;
  return r;
}

}  // namespace detail

/// Argmax over empirical accept rates accepts_k / shots.
inline RecognitionResult recognize_argmax(const TrialCounts& counts,
                                          double epsilon) {
  if (counts.shots_per_arm == 0)
    throw ConfigError("counts carry no shots");
  std::vector<double> rates;
  rates.reserve(counts.accepts.size());
  for (std::uint64_t a : counts.accepts) {
    if (a > counts.shots_per_arm)
      throw InvariantViolation("accept count exceeds shots_per_arm");
    rates.push_back(static_cast<double>(a) /
                    static_cast<double>(counts.shots_per_arm));
  }
  return detail::argmax_of_rates(rates, epsilon);
}

/// Argmax over exact intensities. Rates are normalized as I_k * n / I0, so
/// the result is invariant under rescaling the input intensity.
inline RecognitionResult recognize_argmax(std::span<const double> intensities,
                                          double input_intensity,
                                          double epsilon) {
  if (!(input_intensity > 0.0))
    throw ConfigError("input intensity must be > 0");
  std::vector<double> rates;
  rates.reserve(intensities.size());
  const double scale =
      static_cast<double>(intensities.size()) / input_intensity;
  for (double ik : intensities) rates.push_back(ik * scale);
  return detail::argmax_of_rates(rates, epsilon);
}

}  // namespace qrec
