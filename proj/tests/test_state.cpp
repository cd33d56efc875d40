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
#include <complex>
#include <numbers>
#include <vector>

#include "qrec/ortho.hpp"
#include "qrec/state.hpp"

using Catch::Approx;
using namespace qrec;

namespace {

QuantumState with_phase(const QuantumState& s, double phi) {
  const Complex rot = std::polar(1.0, phi);
  std::vector<Complex> a(s.amplitudes().begin(), s.amplitudes().end());
  for (Complex& x : a) x *= rot;
  return QuantumState::normalized(std::move(a));
}

}  // namespace

TEST_CASE("QuantumState invariants", "[state]") {
  REQUIRE_THROWS_AS(QuantumState({Complex(0.5, 0.0), Complex(0.5, 0.0)}),
                    InvariantViolation);
  REQUIRE_THROWS_AS(QuantumState(std::vector<Complex>{}), ConfigError);
  REQUIRE_THROWS_AS(QuantumState::normalized({Complex(0, 0)}),
                    ZeroVectorError);
  const QuantumState b = QuantumState::basis(4, 2);
  REQUIRE(b[2] == Complex(1.0, 0.0));
  REQUIRE(b[0] == Complex(0.0, 0.0));
  REQUIRE_THROWS_AS(QuantumState::basis(4, 4), ConfigError);
}

TEST_CASE("embed keeps components as real amplitudes", "[state]") {
  const ImageVector v = ImageVector::normalized({1.0, 0.0});
  const QuantumState s = embed(v);
  REQUIRE(s.dim() == 2);
  REQUIRE(s[0] == Complex(1.0, 0.0));
  REQUIRE(s[1] == Complex(0.0, 0.0));
}

TEST_CASE("inner product convention", "[state]") {
  const QuantumState e0 = QuantumState::basis(3, 0);
  const QuantumState e1 = QuantumState::basis(3, 1);

  SECTION("orthonormal endpoints") {
    REQUIRE(inner(e0, e0) == Complex(1.0, 0.0));
    REQUIRE(inner(e0, e1) == Complex(0.0, 0.0));
  }

  SECTION("a = e^{i phi} b gives modulus 1 and argument phi") {
    const QuantumState b = haar_random_state(8, 31);
    for (int k = -3; k <= 3; ++k) {
      const double phi = 0.4 * k;
      const QuantumState a = with_phase(b, phi);
      const Complex ip = inner(a, b);
      REQUIRE(std::abs(ip) == Approx(1.0).margin(1e-12));
      if (k != 0) REQUIRE(std::arg(ip) == Approx(phi).margin(1e-12));
    }
  }

  SECTION("conjugate symmetry") {
    const QuantumState a = haar_random_state(16, 1);
    const QuantumState b = haar_random_state(16, 2);
    const Complex ab = inner(a, b);
    const Complex ba = inner(b, a);
    REQUIRE(ab.real() == Approx(ba.real()).margin(1e-15));
    REQUIRE(ab.imag() == Approx(-ba.imag()).margin(1e-15));
  }

  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(inner(e0, haar_random_state(4, 1)), DimensionMismatch);
  }
}

TEST_CASE("fidelity", "[state]") {
  SECTION("self-fidelity is 1, orthogonal is 0") {
    const QuantumState s = haar_random_state(32, 5);
    REQUIRE(fidelity(s, s) == Approx(1.0).margin(1e-14));
    REQUIRE(fidelity(QuantumState::basis(3, 0), QuantumState::basis(3, 1)) ==
            0.0);
  }

  SECTION("embedded vectors: fidelity equals cosine squared") {
    for (std::uint64_t t = 0; t < 10; ++t) {
      const ImageVector v = random_unit_vector(24, derive_seed(50, t));
      const ImageVector w = random_unit_vector(24, derive_seed(60, t));
      const double c = cosine_similarity(v, w);
      REQUIRE(fidelity(embed(v), embed(w)) == Approx(c * c).margin(1e-14));
    }
  }

  SECTION("global phase never matters") {
    const QuantumState s = haar_random_state(16, 77);
    for (int k = 0; k < 16; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / 16.0;
      REQUIRE(std::abs(fidelity(s, with_phase(s, phi)) - 1.0) <= 1e-12);
    }
  }

  SECTION("haar pairs concentrate near 1/N") {
    const std::size_t n = 32;
    const std::size_t pairs = 10000;
    double sum = 0;
    for (std::size_t t = 0; t < pairs; ++t)
      sum += fidelity(haar_random_state(n, derive_seed(400, t)),
                      haar_random_state(n, derive_seed(500, t)));
    const double mean = sum / pairs;
    REQUIRE(mean > 0.8 / n);
    REQUIRE(mean < 1.2 / n);
  }
}

TEST_CASE("ray_equal", "[state]") {
  const QuantumState s = haar_random_state(8, 3);
  REQUIRE(ray_equal(s, with_phase(s, 1.234), 1e-9));
  REQUIRE(ray_equal(s, with_phase(s, std::numbers::pi), 1e-9));
  REQUIRE_FALSE(ray_equal(QuantumState::basis(2, 0), QuantumState::basis(2, 1),
                          1e-9));
  REQUIRE_THROWS_AS(ray_equal(s, s, 0.0), ConfigError);
}

TEST_CASE("canonical_phase", "[state]") {
  SECTION("pivot becomes real positive") {
    const QuantumState s(
        {Complex(0.0, 0.8), Complex(0.6, 0.0)});
    const QuantumState c = canonical_phase(s);
    REQUIRE(c[0].real() == Approx(0.8).margin(1e-15));
    REQUIRE(c[0].imag() == 0.0);
  }

  SECTION("idempotent bit for bit") {
    const QuantumState s = haar_random_state(16, 9);
    const QuantumState once = canonical_phase(s);
    const QuantumState twice = canonical_phase(once);
    for (std::size_t i = 0; i < s.dim(); ++i) REQUIRE(once[i] == twice[i]);
  }

  SECTION("phase-shifted copies collapse to the same representative") {
    const QuantumState s = haar_random_state(12, 13);
    const QuantumState ref = canonical_phase(s);
    for (int k = 1; k < 8; ++k) {
      const QuantumState c =
          canonical_phase(with_phase(s, 0.7853981633974483 * k));
      for (std::size_t i = 0; i < s.dim(); ++i) {
        REQUIRE(c[i].real() == Approx(ref[i].real()).margin(1e-12));
        REQUIRE(c[i].imag() == Approx(ref[i].imag()).margin(1e-12));
      }
    }
  }

  SECTION("ties pick the lowest index") {
    const QuantumState s = QuantumState::normalized(
        {Complex(0.0, -0.5), Complex(0.5, 0.0), Complex(0.5, 0.0),
         Complex(0.0, 0.5)});
    const QuantumState c = canonical_phase(s);
    // index 0 is the pivot: -0.5i rotated to +0.5.
    REQUIRE(c[0].real() == Approx(0.5).margin(1e-15));
    REQUIRE(c[0].imag() == 0.0);
  }
}

TEST_CASE("haar_random_state", "[state]") {
  const QuantumState a = haar_random_state(64, 17);
  const QuantumState b = haar_random_state(64, 17);
  const QuantumState c = haar_random_state(64, 18);
  double s = 0;
  for (const Complex& x : a.amplitudes()) s += std::norm(x);
  REQUIRE(std::abs(s - 1.0) <= 1e-12);
  for (std::size_t i = 0; i < a.dim(); ++i) REQUIRE(a[i] == b[i]);
  REQUIRE(fidelity(a, c) < 0.9);
}

TEST_CASE("orthonormal expansion resolves the identity", "[state]") {
  // For any orthonormal basis {psi_i} and state chi,
  // sum_i |inner(chi, psi_i)|^2 = 1.
  const std::size_t n = 24;
  std::vector<QuantumState> raw;
  for (std::size_t i = 0; i < n; ++i)
    raw.push_back(haar_random_state(n, derive_seed(900, i)));
  const std::vector<QuantumState> basis = orthogonalize(raw);
  const QuantumState chi = haar_random_state(n, 901);
  double total = 0;
  for (const QuantumState& psi : basis) total += std::norm(inner(chi, psi));
  REQUIRE(std::abs(total - 1.0) <= 1e-10);
}
