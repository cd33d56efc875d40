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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <future>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrec/beam.hpp"
#include "qrec/errors.hpp"
#include "qrec/image.hpp"
#include "qrec/ortho.hpp"
#include "qrec/serialize.hpp"
#include "qrec/state.hpp"

namespace qrec {

enum class RecognizerKind { beam, ortho, both };

inline std::string recognizer_name(RecognizerKind k) {
  switch (k) {
    case RecognizerKind::beam: return "beam";
    case RecognizerKind::ortho: return "ortho";
    case RecognizerKind::both: return "both";
  }
  throw ConfigError("unknown recognizer kind");
}

struct BenchmarkConfig {
  std::size_t dim = 64;
  std::size_t image_count = 8;
  std::vector<NoiseSpec> noise;
  std::uint64_t shots_per_arm = 1000;
  std::uint64_t trials = 100;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  RecognizerKind recognizer = RecognizerKind::both;

  /// Throws ConfigError listing every violated field at once.
  void validate() const;
  static BenchmarkConfig from_json(const Json& j);
  Json to_json() const;
};

struct BenchmarkCell {
  std::string recognizer;  // "beam" or "ortho"
  NoiseSpec noise;
  std::uint64_t trials = 0;
  double correct_rate = 0;       // argmax / measured outcome hits the target
  double false_accept_rate = 0;  // random probe passes the acceptance rule
  double mean_score = 0;         // mean query score (rejections score 0)
  double seconds = 0;            // 0 unless timing was requested
};

struct ConcentrationRow {
  std::size_t dim = 0;
  std::uint64_t trials = 0;
  double mean_abs_inner = 0;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<BenchmarkCell> cells;
  std::vector<ConcentrationRow> concentration;

  std::string to_csv() const;
  Json to_json() const;
};

// ---------------------------------------------------------------------------
// Seed derivation contract.
//
// Every random quantity in a report is a pure function of (config.seed,
// stable identifiers), never of evaluation order. With rid = 0 for the beam
// recognizer and 1 for the single-shot recognizer, j the index into
// config.noise and t the 0-based trial:
//
//   stored image i   = random_unit_vector(dim, chain({seed, kImageSalt, i}))
//   query of trial   = apply_noise(base[t % m], noise_j,
//                                  chain({seed, kQuerySalt, rid, j, t}))
//   probe of trial   = random_unit_vector(dim,
//                                  chain({seed, kProbeSalt, rid, j, t}))
//   recognition seed = chain({seed, kRecognitionSalt, rid, j, t}), with
//                      child 0 for the query run and child 1 for the probe
//                      run (beam: run_beam_trials seed; ortho: substream)
//   concentration    = concentration_estimate(d, kConcentrationPairs,
//                                  chain({seed, kConcentrationSalt, d}))
//
// The beam recognizer queries noisy copies of the original stored images;
// the single-shot recognizer queries noisy copies of the orthogonalized
// states it actually holds, so its zero-noise row is the deterministic
// perfect-recall case.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kImageSalt = 1;
inline constexpr std::uint64_t kQuerySalt = 2;
inline constexpr std::uint64_t kProbeSalt = 3;
inline constexpr std::uint64_t kRecognitionSalt = 4;
inline constexpr std::uint64_t kConcentrationSalt = 5;
inline constexpr std::uint64_t kConcentrationPairs = 4000;

inline std::uint64_t chain_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = 0;
  bool first = true;
  for (std::uint64_t p : parts) {
    if (first) {
      s = p;
      first = false;
    } else {
      s = derive_seed(s, p);
    }
  }
  return s;
}

inline void BenchmarkConfig::validate() const {
  std::vector<std::string> bad;
  if (dim == 0) bad.push_back("dim: must be >= 1");
  if (image_count == 0) bad.push_back("image_count: must be >= 1");
  if (noise.empty()) bad.push_back("noise: must list at least one entry");
  for (std::size_t i = 0; i < noise.size(); ++i) {
    const NoiseSpec& n = noise[i];
    if (n.kind == NoiseSpec::Kind::gaussian) {
      if (!(n.sigma >= 0.0))
        bad.push_back("noise[" + std::to_string(i) + "].sigma: must be >= 0");
    } else if (!(n.dropout_fraction >= 0.0 && n.dropout_fraction <= 1.0)) {
      bad.push_back("noise[" + std::to_string(i) +
                    "].dropout_fraction: must lie in [0, 1]");
    }
  }
  if (shots_per_arm == 0) bad.push_back("shots_per_arm: must be >= 1");
  if (trials == 0) bad.push_back("trials: must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    bad.push_back("epsilon: must lie in (0, 1)");
  if (recognizer != RecognizerKind::beam && image_count > dim)
    bad.push_back(
        "image_count: must be <= dim when the ortho recognizer runs");
  if (!bad.empty()) {
    std::string msg = "invalid benchmark config: ";
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) msg += "; ";
      msg += bad[i];
    }
    throw ConfigError(msg);
  }
}

inline BenchmarkConfig BenchmarkConfig::from_json(const Json& j) {
  if (!j.is_object())
    throw ConfigError("invalid benchmark config: expected a JSON object");
  BenchmarkConfig cfg;
  std::vector<std::string> bad;

  const auto get_uint = [&](const char* key, auto& out, std::uint64_t min) {
    const auto it = j.find(key);
    if (it == j.end()) {
      bad.push_back(std::string(key) + ": missing");
      return;
    }
    std::uint64_t v = 0;
    if (it->is_number_unsigned()) {
      v = it->get<std::uint64_t>();
    } else if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
      v = static_cast<std::uint64_t>(it->get<std::int64_t>());
    } else {
      bad.push_back(std::string(key) + ": must be an integer >= " +
                    std::to_string(min));
      return;
    }
    if (v < min) {
      bad.push_back(std::string(key) + ": must be an integer >= " +
                    std::to_string(min));
      return;
    }
    out = static_cast<std::remove_reference_t<decltype(out)>>(v);
  };

  get_uint("dim", cfg.dim, 1);
  get_uint("image_count", cfg.image_count, 1);
  get_uint("shots_per_arm", cfg.shots_per_arm, 1);
  get_uint("trials", cfg.trials, 1);
  get_uint("seed", cfg.seed, 0);

  if (const auto it = j.find("epsilon"); it == j.end()) {
    bad.push_back("epsilon: missing");
  } else if (!it->is_number() ||
             !(it->get<double>() > 0.0 && it->get<double>() < 1.0)) {
    bad.push_back("epsilon: must be a number in (0, 1)");
  } else {
    cfg.epsilon = it->get<double>();
  }

  if (const auto it = j.find("recognizer"); it == j.end()) {
    bad.push_back("recognizer: missing");
  } else if (!it->is_string()) {
    bad.push_back("recognizer: must be \"beam\", \"ortho\" or \"both\"");
  } else {
    const std::string r = it->get<std::string>();
    if (r == "beam") cfg.recognizer = RecognizerKind::beam;
    else if (r == "ortho") cfg.recognizer = RecognizerKind::ortho;
    else if (r == "both") cfg.recognizer = RecognizerKind::both;
    else bad.push_back("recognizer: must be \"beam\", \"ortho\" or \"both\"");
  }

  if (const auto it = j.find("noise"); it == j.end()) {
    bad.push_back("noise: missing");
  } else if (!it->is_array() || it->empty()) {
    bad.push_back("noise: must be a non-empty array");
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& n = (*it)[i];
      const std::string at = "noise[" + std::to_string(i) + "]";
      if (!n.is_object() || !n.contains("kind") || !n["kind"].is_string()) {
        bad.push_back(at + ": expected {\"kind\": ...}");
        continue;
      }
      const std::string kind = n["kind"].get<std::string>();
      if (kind == "gaussian") {
        if (!n.contains("sigma") || !n["sigma"].is_number() ||
            !(n["sigma"].get<double>() >= 0.0)) {
          bad.push_back(at + ".sigma: must be a number >= 0");
        } else {
          cfg.noise.push_back(NoiseSpec::gaussian(n["sigma"].get<double>()));
        }
      } else if (kind == "dropout") {
        if (!n.contains("dropout_fraction") ||
            !n["dropout_fraction"].is_number() ||
            !(n["dropout_fraction"].get<double>() >= 0.0 &&
              n["dropout_fraction"].get<double>() <= 1.0)) {
          bad.push_back(at + ".dropout_fraction: must lie in [0, 1]");
        } else {
          cfg.noise.push_back(
              NoiseSpec::dropout(n["dropout_fraction"].get<double>()));
        }
      } else {
        bad.push_back(at + ".kind: must be \"gaussian\" or \"dropout\"");
      }
    }
  }

  if (!bad.empty()) {
    std::string msg = "invalid benchmark config: ";
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) msg += "; ";
      msg += bad[i];
    }
    throw ConfigError(msg);
  }
  cfg.validate();
  return cfg;
}

inline Json noise_to_json(const NoiseSpec& n) {
  if (n.kind == NoiseSpec::Kind::gaussian)
    return Json{{"kind", "gaussian"}, {"sigma", n.sigma}};
  return Json{{"kind", "dropout"}, {"dropout_fraction", n.dropout_fraction}};
}

inline Json BenchmarkConfig::to_json() const {
  Json jn = Json::array();
  for (const NoiseSpec& n : noise) jn.push_back(noise_to_json(n));
  return Json{{"dim", dim},
              {"image_count", image_count},
              {"noise", std::move(jn)},
              {"shots_per_arm", shots_per_arm},
              {"trials", trials},
              {"epsilon", epsilon},
              {"seed", seed},
              {"recognizer", recognizer_name(recognizer)}};
}

namespace detail {

inline const char* noise_kind_name(const NoiseSpec& n) {
  return n.kind == NoiseSpec::Kind::gaussian ? "gaussian" : "dropout";
}

inline double noise_param(const NoiseSpec& n) {
  return n.kind == NoiseSpec::Kind::gaussian ? n.sigma : n.dropout_fraction;
}

// Fixtures shared by every cell of one report.
struct BenchmarkFixtures {
  std::vector<ImageVector> images;          // originals, beam query bases
  std::optional<FilterBank> bank;           // beam recognizer
  std::optional<OrthoMemory> memory;        // ortho recognizer
  std::vector<ImageVector> ortho_bases;     // ortho query bases
};

inline BenchmarkFixtures make_fixtures(const BenchmarkConfig& cfg) {
  BenchmarkFixtures fx;
  std::vector<QuantumState> states;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cfg.image_count; ++i) {
    fx.images.push_back(
        random_unit_vector(cfg.dim, chain_seed({cfg.seed, kImageSalt, i})));
    states.push_back(embed(fx.images.back()));
    labels.push_back("img" + std::to_string(i));
  }
  const bool want_beam = cfg.recognizer != RecognizerKind::ortho;
  const bool want_ortho = cfg.recognizer != RecognizerKind::beam;
  if (want_beam) {
    std::vector<Filter> filters;
    for (std::size_t i = 0; i < states.size(); ++i)
      filters.push_back(build_filter(states[i], labels[i]));
    fx.bank.emplace(std::move(filters), 1.0);
  }
  if (want_ortho) {
    fx.memory.emplace(OrthoMemory::build(states, labels));
    for (const QuantumState& s : fx.memory->ortho_states()) {
      std::vector<double> re;
      re.reserve(s.dim());
      for (const Complex& a : s.amplitudes()) re.push_back(a.real());
      fx.ortho_bases.push_back(ImageVector(std::move(re)));
    }
  }
  return fx;
}

inline BenchmarkCell run_cell(const BenchmarkConfig& cfg,
                              const BenchmarkFixtures& fx, std::uint64_t rid,
                              std::size_t noise_index, bool timing) {
  const auto t0 = std::chrono::steady_clock::now();
  const NoiseSpec& noise = cfg.noise[noise_index];
  const std::size_t m = cfg.image_count;
  std::uint64_t correct = 0;
  std::uint64_t false_accepts = 0;
  double score_sum = 0;

  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    const std::size_t target = static_cast<std::size_t>(t % m);
    const std::uint64_t j = noise_index;
    const ImageVector& base =
        rid == 0 ? fx.images[target] : fx.ortho_bases[target];
    const ImageVector query_vec =
        apply_noise(base, noise, chain_seed({cfg.seed, kQuerySalt, rid, j, t}));
    const QuantumState query = embed(query_vec);
    const QuantumState probe = embed(random_unit_vector(
        cfg.dim, chain_seed({cfg.seed, kProbeSalt, rid, j, t})));
    const std::uint64_t rseed =
        chain_seed({cfg.seed, kRecognitionSalt, rid, j, t});

    RecognitionResult qres, pres;
    if (rid == 0) {
      qres = recognize_argmax(
          run_beam_trials(*fx.bank, query, cfg.shots_per_arm,
                          derive_seed(rseed, 0)),
          cfg.epsilon);
      pres = recognize_argmax(
          run_beam_trials(*fx.bank, probe, cfg.shots_per_arm,
                          derive_seed(rseed, 1)),
          cfg.epsilon);
    } else {
      RngStream gq = substream(rseed, 0);
      qres = recognize_single_shot(*fx.memory, query, gq, cfg.epsilon);
      RngStream gp = substream(rseed, 1);
      pres = recognize_single_shot(*fx.memory, probe, gp, cfg.epsilon);
    }
    if (qres.best_index == target) ++correct;
    score_sum += qres.score;
    if (pres.accepted) ++false_accepts;
  }

  BenchmarkCell cell;
  cell.recognizer = rid == 0 ? "beam" : "ortho";
  cell.noise = noise;
  cell.trials = cfg.trials;
  cell.correct_rate =
      static_cast<double>(correct) / static_cast<double>(cfg.trials);
  cell.false_accept_rate =
      static_cast<double>(false_accepts) / static_cast<double>(cfg.trials);
  cell.mean_score = score_sum / static_cast<double>(cfg.trials);
  if (timing) {
    const auto t1 = std::chrono::steady_clock::now();
    cell.seconds = std::chrono::duration<double>(t1 - t0).count();
  }
  return cell;
}

}  // namespace detail

/// Runs every cell of the report. `jobs` > 1 evaluates cells concurrently;
/// results are identical regardless (each cell derives its own seeds).
/// `timing` fills the seconds column with wall-clock measurements at the
/// cost of byte-reproducibility of the report files.
inline BenchmarkReport run_benchmark(const BenchmarkConfig& cfg,
                                     unsigned jobs = 1, bool timing = false) {
  cfg.validate();
  const detail::BenchmarkFixtures fx = detail::make_fixtures(cfg);

  std::vector<std::pair<std::uint64_t, std::size_t>> specs;  // (rid, noise j)
  if (cfg.recognizer != RecognizerKind::ortho)
    for (std::size_t j = 0; j < cfg.noise.size(); ++j) specs.emplace_back(0, j);
  if (cfg.recognizer != RecognizerKind::beam)
    for (std::size_t j = 0; j < cfg.noise.size(); ++j) specs.emplace_back(1, j);

  BenchmarkReport report;
  report.config = cfg;
  report.cells.resize(specs.size());

  if (jobs <= 1 || specs.size() <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i)
      report.cells[i] =
          detail::run_cell(cfg, fx, specs[i].first, specs[i].second, timing);
  } else {
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < specs.size();
           i = next.fetch_add(1))
        report.cells[i] =
            detail::run_cell(cfg, fx, specs[i].first, specs[i].second, timing);
    };
    std::vector<std::future<void>> pool;
    const unsigned count = std::min<unsigned>(jobs, specs.size());
    for (unsigned w = 0; w < count; ++w)
      pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }

  std::set<std::size_t> dims{64, 256, 1024};
  dims.insert(cfg.dim);
  for (std::size_t d : dims) {
    ConcentrationRow row;
    row.dim = d;
    row.trials = kConcentrationPairs;
    row.mean_abs_inner = concentration_estimate(
        d, kConcentrationPairs, chain_seed({cfg.seed, kConcentrationSalt, d}));
    report.concentration.push_back(row);
  }
  return report;
}

inline std::string BenchmarkReport::to_csv() const {
  std::string out =
      "recognizer,noise_kind,noise_param,trials,correct_rate,"
      "false_accept_rate,mean_score,seconds\n";
  for (const BenchmarkCell& c : cells) {
    out += c.recognizer;
    out += ',';
    out += detail::noise_kind_name(c.noise);
    out += ',';
    out += format_double(detail::noise_param(c.noise));
    out += ',';
    out += std::to_string(c.trials);
    out += ',';
    out += format_double(c.correct_rate);
    out += ',';
    out += format_double(c.false_accept_rate);
    out += ',';
    out += format_double(c.mean_score);
    out += ',';
    out += format_double(c.seconds);
    out += '\n';
  }
  return out;
}

inline Json BenchmarkReport::to_json() const {
  Json jc = Json::array();
  for (const BenchmarkCell& c : cells)
    jc.push_back(Json{{"recognizer", c.recognizer},
                      {"noise_kind", detail::noise_kind_name(c.noise)},
                      {"noise_param", detail::noise_param(c.noise)},
                      {"trials", c.trials},
                      {"correct_rate", c.correct_rate},
                      {"false_accept_rate", c.false_accept_rate},
                      {"mean_score", c.mean_score},
                      {"seconds", c.seconds}});
  Json jr = Json::array();
  for (const ConcentrationRow& r : concentration)
    jr.push_back(Json{{"dim", r.dim},
                      {"trials", r.trials},
                      {"mean_abs_inner", r.mean_abs_inner}});
  return Json{{"config", config.to_json()},
              {"cells", std::move(jc)},
              {"concentration", std::move(jr)}};
}

}  // namespace qrec
