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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qrec/beam.hpp"

using Catch::Approx;
using namespace qrec;

namespace {

FilterBank basis_bank(std::size_t dim, double intensity = 1.0) {
  std::vector<Filter> filters;
  for (std::size_t i = 0; i < dim; ++i)
    filters.push_back(
        build_filter(QuantumState::basis(dim, i), "b" + std::to_string(i)));
  return FilterBank(std::move(filters), intensity);
}

FilterBank haar_bank(std::size_t dim, std::size_t n, std::uint64_t seed,
                     double intensity = 1.0) {
  std::vector<Filter> filters;
  for (std::size_t i = 0; i < n; ++i)
    filters.push_back(build_filter(haar_random_state(dim, derive_seed(seed, i)),
                                   "h" + std::to_string(i)));
  return FilterBank(std::move(filters), intensity);
}

// Mixes a haar direction into `s` and normalizes; keeps the fidelity against
// s high but below 1.
QuantumState smear(const QuantumState& s, double weight, std::uint64_t seed) {
  const QuantumState r = haar_random_state(s.dim(), seed);
  std::vector<Complex> a(s.amplitudes().begin(), s.amplitudes().end());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = (1.0 - weight) * a[i] + weight * r[i];
  return QuantumState::normalized(std::move(a));
}

}  // namespace

TEST_CASE("build_filter stores the canonical representative", "[beam]") {
  const QuantumState s = haar_random_state(8, 40);
  std::vector<Complex> rotated(s.amplitudes().begin(), s.amplitudes().end());
  for (Complex& x : rotated) x *= Complex(0.0, 1.0);  // i * s
  const Filter a = build_filter(s, "x");
  const Filter b = build_filter(QuantumState::normalized(std::move(rotated)), "x");
  for (std::size_t i = 0; i < s.dim(); ++i) {
    REQUIRE(a.stored[i].real() == Approx(b.stored[i].real()).margin(1e-12));
    REQUIRE(a.stored[i].imag() == Approx(b.stored[i].imag()).margin(1e-12));
  }
}

TEST_CASE("FilterBank construction", "[beam]") {
  REQUIRE_THROWS_AS(FilterBank({}), ConfigError);
  REQUIRE_THROWS_AS(basis_bank(4, 0.0), ConfigError);
  REQUIRE_THROWS_AS(basis_bank(4, -1.0), ConfigError);
  std::vector<Filter> filters;
  filters.push_back(build_filter(QuantumState::basis(4, 0), "a"));
  filters.push_back(build_filter(QuantumState::basis(5, 0), "b"));
  REQUIRE_THROWS_AS(FilterBank(std::move(filters)), DimensionMismatch);
}

TEST_CASE("filter_pass", "[beam]") {
  const Filter f = build_filter(QuantumState::basis(4, 1), "one");

  SECTION("identical input always passes and emerges as the stored state") {
    RngStream g = make_stream(7);
    for (int t = 0; t < 200; ++t) {
      const auto out = filter_pass(f, QuantumState::basis(4, 1), g);
      REQUIRE(out.has_value());
      for (std::size_t i = 0; i < 4; ++i) REQUIRE((*out)[i] == f.stored[i]);
    }
  }

  SECTION("orthogonal input never passes") {
    RngStream g = make_stream(8);
    for (int t = 0; t < 200; ++t)
      REQUIRE_FALSE(filter_pass(f, QuantumState::basis(4, 2), g).has_value());
  }

  SECTION("pass rate tracks the fidelity") {
    const QuantumState input = smear(QuantumState::basis(4, 1), 0.5, 99);
    const double p = fidelity(f.stored, input);
    RngStream g = make_stream(9);
    std::size_t hits = 0;
    const std::size_t shots = 100000;
    for (std::size_t t = 0; t < shots; ++t)
      if (filter_pass(f, input, g)) ++hits;
    const double rate = static_cast<double>(hits) / shots;
    REQUIRE(std::abs(rate - p) <= 3.0 * std::sqrt(p * (1 - p) / shots));
  }

  SECTION("dimension mismatch") {
    RngStream g = make_stream(1);
    REQUIRE_THROWS_AS(filter_pass(f, QuantumState::basis(5, 1), g),
                      DimensionMismatch);
  }
}

TEST_CASE("split_intensities", "[beam]") {
  SECTION("a stored basis state claims exactly I0/n on its own arm") {
    const FilterBank bank = basis_bank(8, 2.0);
    const auto intensities = split_intensities(bank, QuantumState::basis(8, 3));
    for (std::size_t k = 0; k < 8; ++k)
      REQUIRE(intensities[k] == (k == 3 ? 0.25 : 0.0));
  }

  SECTION("no arm exceeds I0/n and a complete basis conserves the total") {
    const FilterBank bank = basis_bank(8, 1.0);
    const QuantumState input = haar_random_state(8, 3);
    const auto intensities = split_intensities(bank, input);
    double total = 0;
    for (double ik : intensities) {
      REQUIRE(ik <= 1.0 / 8 + 1e-15);
      total += ik;
    }
    // The 8 arms of a complete orthonormal bank absorb the whole per-arm
    // budget I0/n.
    REQUIRE(total == Approx(1.0 / 8).margin(1e-12));
  }

  SECTION("incomplete banks lose intensity") {
    const FilterBank bank = haar_bank(16, 3, 77);
    const auto intensities = split_intensities(bank, haar_random_state(16, 5));
    double total = 0;
    for (double ik : intensities) total += ik;
    REQUIRE(total < 1.0 / 3);
  }
}

TEST_CASE("run_beam_trials", "[beam]") {
  SECTION("orthonormal bank resolves a stored state exactly") {
    const FilterBank bank = basis_bank(6);
    const TrialCounts counts =
        run_beam_trials(bank, QuantumState::basis(6, 2), 500, 11);
    REQUIRE(counts.shots_per_arm == 500);
    for (std::size_t k = 0; k < 6; ++k)
      REQUIRE(counts.accepts[k] == (k == 2 ? 500u : 0u));
  }

  SECTION("deterministic in the seed") {
    const FilterBank bank = haar_bank(32, 4, 21);
    const QuantumState input = haar_random_state(32, 6);
    const TrialCounts a = run_beam_trials(bank, input, 2000, 5);
    const TrialCounts b = run_beam_trials(bank, input, 2000, 5);
    const TrialCounts c = run_beam_trials(bank, input, 2000, 6);
    REQUIRE(a.accepts == b.accepts);
    REQUIRE(a.accepts != c.accepts);
  }

  SECTION("per-arm counts do not depend on evaluation order") {
    const FilterBank bank = haar_bank(32, 5, 22);
    const QuantumState input = haar_random_state(32, 7);
    const TrialCounts counts = run_beam_trials(bank, input, 5000, 13);
    for (std::size_t k = bank.size(); k-- > 0;) {
      const double p = fidelity(bank[k].stored, input);
      REQUIRE(arm_accept_count(p, 5000, 13, k) == counts.accepts[k]);
    }
  }

  SECTION("accept rate is binomial around the fidelity") {
    const QuantumState stored = haar_random_state(16, 50);
    const FilterBank bank({build_filter(stored, "s")});
    const QuantumState input = smear(stored, 0.6, 51);
    const double p = fidelity(bank[0].stored, input);
    const std::uint64_t shots = 100000;
    const TrialCounts counts = run_beam_trials(bank, input, shots, 1);
    const double rate = static_cast<double>(counts.accepts[0]) / shots;
    REQUIRE(std::abs(rate - p) <=
            3.0 * std::sqrt(p * (1 - p) / static_cast<double>(shots)));
  }

  SECTION("zero shots are rejected") {
    const FilterBank bank = basis_bank(2);
    REQUIRE_THROWS_AS(run_beam_trials(bank, QuantumState::basis(2, 0), 0, 1),
                      ConfigError);
  }
}

TEST_CASE("recognize_argmax over counts", "[beam]") {
  SECTION("clear winner above threshold is accepted") {
    const TrialCounts counts{100, {1, 98, 2}};
    const RecognitionResult r = recognize_argmax(counts, 0.1);
    REQUIRE(r.best_index == 1);
    REQUIRE(r.score == Approx(0.98));
    REQUIRE(r.accepted);
  }

  SECTION("uniformly low rates are rejected but still ranked") {
    const TrialCounts counts{100, {1, 1, 1}};
    const RecognitionResult r = recognize_argmax(counts, 0.1);
    REQUIRE(r.best_index == 0);  // tie resolves to the lowest index
    REQUIRE_FALSE(r.accepted);
  }

  SECTION("score sits right at the boundary only when strictly above") {
    const TrialCounts counts{10, {9}};
    REQUIRE_FALSE(recognize_argmax(counts, 0.1).accepted);  // 0.9 > 0.9 fails
    REQUIRE(recognize_argmax(counts, 0.11).accepted);
  }

  SECTION("rejects malformed inputs") {
    REQUIRE_THROWS_AS(recognize_argmax(TrialCounts{0, {}}, 0.1), ConfigError);
    REQUIRE_THROWS_AS(recognize_argmax(TrialCounts{100, {}}, 0.1),
                      ConfigError);
    REQUIRE_THROWS_AS(recognize_argmax(TrialCounts{10, {11}}, 0.1),
                      InvariantViolation);
    REQUIRE_THROWS_AS(recognize_argmax(TrialCounts{10, {5}}, 0.0),
                      ConfigError);
    REQUIRE_THROWS_AS(recognize_argmax(TrialCounts{10, {5}}, 1.0),
                      ConfigError);
  }
}

TEST_CASE("recognize_argmax over intensities", "[beam]") {
  SECTION("rates are intensities rescaled by n/I0") {
    const std::vector<double> intensities{0.02, 0.32, 0.01};
    const RecognitionResult r = recognize_argmax(intensities, 1.0, 0.1);
    REQUIRE(r.best_index == 1);
    REQUIRE(r.score == Approx(0.96));
    REQUIRE(r.accepted);
  }

  SECTION("invariant under input intensity rescaling") {
    const QuantumState target = haar_random_state(24, 61);
    const QuantumState input = smear(target, 0.3, 62);
    for (const double i0 : {1.0, 7.5}) {
      std::vector<Filter> filters;
      filters.push_back(build_filter(target, "t"));
      filters.push_back(build_filter(haar_random_state(24, 63), "o"));
      const FilterBank bank(std::move(filters), i0);
      const auto ints = split_intensities(bank, input);
      const RecognitionResult r = recognize_argmax(ints, i0, 0.3);
      REQUIRE(r.best_index == 0);
      REQUIRE(r.score == Approx(fidelity(target, input)).margin(1e-12));
    }
  }
}

TEST_CASE("counts agree with exact intensities at large shots", "[beam]") {
  // With the top two fidelities separated, the finite-shot argmax matches
  // the exact-intensity argmax essentially always at 10^4 shots per arm.
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    const FilterBank bank = haar_bank(64, 8, derive_seed(700, rep));
    const std::size_t target = static_cast<std::size_t>(rep % 8);
    const QuantumState input =
        smear(bank[target].stored, 0.25, derive_seed(701, rep));
    const auto exact = recognize_argmax(split_intensities(bank, input),
                                        bank.input_intensity(), 0.5);
    const auto sampled = recognize_argmax(
        run_beam_trials(bank, input, 10000, derive_seed(702, rep)), 0.5);
    REQUIRE(exact.best_index == sampled.best_index);
    REQUIRE(exact.best_index == target);
  }
}
