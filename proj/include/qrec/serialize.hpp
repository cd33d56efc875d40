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

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qrec/beam.hpp"
#include "qrec/errors.hpp"
#include "qrec/ortho.hpp"
#include "qrec/state.hpp"

namespace qrec {

using Json = nlohmann::json;

/// Shortest round-trip decimal form of `v` (std::to_chars). Locale-free and
/// byte-stable, which the reproducibility contract of the CLI relies on.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("double formatting failed");
  return std::string(buf, ptr);
}

namespace detail {

inline const Json& require_field(const Json& j, const char* key,
                                 const char* what) {
  if (!j.is_object())
    throw ParseError(std::string(what) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

inline std::vector<double> number_array(const Json& j, const char* what) {
  if (!j.is_array())
    throw ParseError(std::string(what) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_number())
      throw ParseError(std::string(what) + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// State as {"dim", "re", "im"}, written in canonical phase so equal rays
/// serialize identically.
inline Json state_to_json(const QuantumState& state) {
  const QuantumState canon = canonical_phase(state);
  Json re = Json::array();
  Json im = Json::array();
  for (const Complex& a : canon.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  return Json{{"dim", canon.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

/// Inverse of state_to_json. Schema problems raise ParseError; a vector
/// that no longer satisfies the norm invariant raises InvariantViolation.
inline QuantumState state_from_json(const Json& j) {
  const Json& jd = detail::require_field(j, "dim", "state");
  if (!jd.is_number_unsigned() || jd.get<std::uint64_t>() == 0)
    throw ParseError("state: \"dim\" must be a positive integer");
  const auto dim = jd.get<std::size_t>();
  const std::vector<double> re =
      detail::number_array(detail::require_field(j, "re", "state"), "state.re");
  const std::vector<double> im =
      detail::number_array(detail::require_field(j, "im", "state"), "state.im");
  if (re.size() != dim || im.size() != dim)
    throw ParseError("state: \"re\"/\"im\" length does not match \"dim\"");
  std::vector<Complex> amps;
  amps.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) amps.emplace_back(re[i], im[i]);
  return QuantumState(std::move(amps));
}

/// Bank as {"intensity", "filters": [{"label", "state"}...]}.
inline Json bank_to_json(const FilterBank& bank) {
  Json filters = Json::array();
  for (const Filter& f : bank.filters())
    filters.push_back(Json{{"label", f.label}, {"state", state_to_json(f.stored)}});
  return Json{{"intensity", bank.input_intensity()},
              {"filters", std::move(filters)}};
}

inline FilterBank bank_from_json(const Json& j) {
  const Json& ji = detail::require_field(j, "intensity", "bank");
  if (!ji.is_number())
    throw ParseError("bank: \"intensity\" must be a number");
  const double intensity = ji.get<double>();
  const Json& jf = detail::require_field(j, "filters", "bank");
  if (!jf.is_array() || jf.empty())
    throw ParseError("bank: \"filters\" must be a non-empty array");
  std::vector<Filter> filters;
  filters.reserve(jf.size());
  for (const Json& f : jf) {
    const Json& jl = detail::require_field(f, "label", "filter");
    if (!jl.is_string()) throw ParseError("filter: \"label\" must be a string");
    filters.push_back(Filter{
        state_from_json(detail::require_field(f, "state", "filter")),
        jl.get<std::string>()});
  }
  return FilterBank(std::move(filters), intensity);
}

namespace detail {

inline Json matrix_to_json(const Unitary& u) {
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t r = 0; r < u.dim(); ++r) {
    Json rre = Json::array();
    Json rim = Json::array();
    for (std::size_t c = 0; c < u.dim(); ++c) {
      rre.push_back(u.at(r, c).real());
      rim.push_back(u.at(r, c).imag());
    }
    re.push_back(std::move(rre));
    im.push_back(std::move(rim));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Unitary matrix_from_json(const Json& j, std::size_t dim) {
  const Json& jre = require_field(j, "re", "rotation");
  const Json& jim = require_field(j, "im", "rotation");
  if (!jre.is_array() || !jim.is_array() || jre.size() != dim ||
      jim.size() != dim)
    throw ParseError("rotation: expected dim x dim \"re\"/\"im\" arrays");
  std::vector<Complex> flat;
  flat.reserve(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::vector<double> re = number_array(jre[r], "rotation.re");
    const std::vector<double> im = number_array(jim[r], "rotation.im");
    if (re.size() != dim || im.size() != dim)
      throw ParseError("rotation: expected dim x dim \"re\"/\"im\" arrays");
    for (std::size_t c = 0; c < dim; ++c) flat.emplace_back(re[c], im[c]);
  }
  return Unitary(dim, std::move(flat));
}

}  // namespace detail

/// Memory as {"dim", "k", "labels", "ortho_states", "rotation"}. Originals
/// are an in-process convenience and are not persisted.
inline Json memory_to_json(const OrthoMemory& memory) {
  Json states = Json::array();
  for (const QuantumState& s : memory.ortho_states())
    states.push_back(state_to_json(s));
  Json labels = Json::array();
  for (const std::string& l : memory.labels()) labels.push_back(l);
  return Json{{"dim", memory.dim()},
              {"k", memory.stored_count()},
              {"labels", std::move(labels)},
              {"ortho_states", std::move(states)},
              {"rotation", detail::matrix_to_json(memory.rotation())}};
}

/// Inverse of memory_to_json. The OrthoMemory constructor re-validates
/// orthonormality, unitarity and the rotation mapping, so a corrupted file
/// surfaces as InvariantViolation rather than a wrong answer later.
inline OrthoMemory memory_from_json(const Json& j) {
  const Json& jd = detail::require_field(j, "dim", "memory");
  if (!jd.is_number_unsigned() || jd.get<std::uint64_t>() == 0)
    throw ParseError("memory: \"dim\" must be a positive integer");
  const auto dim = jd.get<std::size_t>();
  const Json& jk = detail::require_field(j, "k", "memory");
  if (!jk.is_number_unsigned() || jk.get<std::uint64_t>() == 0)
    throw ParseError("memory: \"k\" must be a positive integer");
  const auto k = jk.get<std::size_t>();

  const Json& jl = detail::require_field(j, "labels", "memory");
  if (!jl.is_array() || jl.size() != k)
    throw ParseError("memory: \"labels\" must be an array of k strings");
  std::vector<std::string> labels;
  labels.reserve(k);
  for (const Json& l : jl) {
    if (!l.is_string())
      throw ParseError("memory: \"labels\" must be an array of k strings");
    labels.push_back(l.get<std::string>());
  }

  const Json& js = detail::require_field(j, "ortho_states", "memory");
  if (!js.is_array() || js.size() != k)
    throw ParseError("memory: \"ortho_states\" must be an array of k states");
  std::vector<QuantumState> states;
  states.reserve(k);
  for (const Json& s : js) states.push_back(state_from_json(s));

  Unitary rot = detail::matrix_from_json(
      detail::require_field(j, "rotation", "memory"), dim);
  return OrthoMemory(dim, std::move(states), std::move(rot),
                     std::move(labels));
}

/// Accept counts as CSV with header arm,label,accepts,shots,rate.
inline std::string trial_counts_csv(const TrialCounts& counts,
                                    const FilterBank& bank) {
  if (counts.accepts.size() != bank.size())
    throw DimensionMismatch(counts.accepts.size(), bank.size());
  std::string out = "arm,label,accepts,shots,rate\n";
  for (std::size_t k = 0; k < counts.accepts.size(); ++k) {
    const double rate = static_cast<double>(counts.accepts[k]) /
                        static_cast<double>(counts.shots_per_arm);
    out += std::to_string(k);
    out += ',';
    out += bank[k].label;
    out += ',';
    out += std::to_string(counts.accepts[k]);
    out += ',';
    out += std::to_string(counts.shots_per_arm);
    out += ',';
    out += format_double(rate);
    out += '\n';
  }
  return out;
}

/// Parses JSON text, mapping nlohmann's error (with byte position) into
/// this library's ParseError.
inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(),
                     e.byte > 0 ? static_cast<std::size_t>(e.byte - 1) : 0);
  }
}

}  // namespace qrec
