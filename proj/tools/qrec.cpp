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

// Command line front end: encode, store, recognize, benchmark.
//
// Exit codes: 0 on success, 1 for input/format/configuration problems,
// 2 for dimension or consistency problems (mismatched operands, corrupt
// memory files, linearly dependent stored sets, flag/file disagreements).

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrec/qrec.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qrec::ConfigError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw qrec::ConfigError("cannot read file: " + path);
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw qrec::ConfigError("cannot write file: " + path);
  out << content;
  out.flush();
  if (!out) throw qrec::ConfigError("cannot write file: " + path);
}

qrec::ImageFormat pick_format(const std::string& path,
                              const std::string& format_flag,
                              std::string_view bytes) {
  if (format_flag == "csv") return qrec::ImageFormat::csv;
  if (format_flag == "pgm") {
    const auto magic = qrec::sniff_pgm(bytes);
    if (!magic)
      throw qrec::ParseError(path + ": not a PGM file (expected P2 or P5)", 0);
    return *magic;
  }
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".csv") return qrec::ImageFormat::csv;
  if (ext == ".pgm" || ext == ".pnm") {
    const auto magic = qrec::sniff_pgm(bytes);
    if (!magic)
      throw qrec::ParseError(path + ": not a PGM file (expected P2 or P5)", 0);
    return *magic;
  }
  if (const auto magic = qrec::sniff_pgm(bytes)) return *magic;
  throw qrec::ConfigError("cannot infer the format of " + path +
                          "; pass --format pgm|csv");
}

qrec::ImageVector load_image_vector(const std::string& path,
                                    const std::string& format_flag) {
  const std::string bytes = read_file(path);
  const qrec::ImageFormat fmt = pick_format(path, format_flag, bytes);
  try {
    const qrec::RawImage img = qrec::parse_image(bytes, fmt);
    return qrec::center_and_normalize(img);
  } catch (const qrec::ParseError& e) {
    throw qrec::ParseError(path + ": " + e.what());
  } catch (const qrec::ZeroVectorError& e) {
    throw qrec::ZeroVectorError(path + ": " + e.what());
  }
}

int cmd_encode(const std::string& image_path, const std::string& format_flag) {
  const qrec::ImageVector v = load_image_vector(image_path, format_flag);
  const qrec::QuantumState state = qrec::embed(v);
  std::cout << qrec::state_to_json(state).dump() << "\n";
  return 0;
}

int cmd_store(const std::vector<std::string>& image_paths,
              const std::string& mode, const std::string& out_path,
              const std::string& format_flag, double intensity) {
  std::vector<qrec::QuantumState> states;
  std::vector<std::string> labels;
  for (const std::string& p : image_paths) {
    states.push_back(qrec::embed(load_image_vector(p, format_flag)));
    labels.push_back(fs::path(p).stem().string());
  }
  const std::size_t dim = states.front().dim();
  for (const qrec::QuantumState& s : states)
    if (s.dim() != dim) throw qrec::DimensionMismatch(dim, s.dim());

  double max_overlap = 0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      max_overlap = std::max(max_overlap,
                             std::abs(qrec::inner(states[i], states[j])));

  if (mode == "beam") {
    std::vector<qrec::Filter> filters;
    for (std::size_t i = 0; i < states.size(); ++i)
      filters.push_back(qrec::build_filter(states[i], labels[i]));
    const qrec::FilterBank bank(std::move(filters), intensity);
    write_file(out_path, qrec::bank_to_json(bank).dump(2) + "\n");
    std::cout << "stored " << bank.size() << " filters, dim " << bank.dim()
              << ", max pairwise |inner| " << qrec::format_double(max_overlap)
              << " -> " << out_path << "\n";
  } else {
    const qrec::OrthoMemory memory = qrec::OrthoMemory::build(states, labels);
    write_file(out_path, qrec::memory_to_json(memory).dump(2) + "\n");
    std::cout << "stored " << memory.stored_count() << " states, dim "
              << memory.dim() << ", max pairwise |inner| "
              << qrec::format_double(max_overlap) << " -> " << out_path
              << "\n";
    const std::vector<double> d = memory.distortions();
    for (std::size_t i = 0; i < d.size(); ++i)
      std::cout << "  " << labels[i] << ": fidelity vs orthogonalized "
                << qrec::format_double(d[i]) << "\n";
  }
  return 0;
}

int cmd_recognize(const std::string& memory_path,
                  const std::string& query_path, const std::string& mode,
                  const std::string& format_flag, std::uint64_t shots,
                  double epsilon, std::uint64_t seed,
                  const std::string& out_path,
                  const std::string& counts_path) {
  const qrec::Json mj = qrec::parse_json_text(read_file(memory_path));
  const bool is_bank = mj.contains("filters");
  const bool is_memory = mj.contains("rotation");
  if (is_bank == is_memory)
    throw qrec::ParseError(memory_path +
                           ": unrecognized memory schema (expected a filter "
                           "bank or an ortho memory)");
  if (!mode.empty()) {
    if (is_bank && mode != "beam")
      throw qrec::InvariantViolation("--mode " + mode + " requested but " +
                                     memory_path + " holds a beam filter bank");
    if (is_memory && mode != "ortho")
      throw qrec::InvariantViolation("--mode " + mode + " requested but " +
                                     memory_path + " holds an ortho memory");
  }

  const qrec::QuantumState query =
      qrec::embed(load_image_vector(query_path, format_flag));

  qrec::Json out;
  qrec::RecognitionResult res;
  std::optional<std::string> label;

  if (is_bank) {
    const qrec::FilterBank bank = qrec::bank_from_json(mj);
    const qrec::TrialCounts counts =
        qrec::run_beam_trials(bank, query, shots, seed);
    res = qrec::recognize_argmax(counts, epsilon);
    if (res.best_index) label = bank[*res.best_index].label;
    qrec::Json arms = qrec::Json::array();
    for (std::size_t k = 0; k < counts.accepts.size(); ++k)
      arms.push_back(qrec::Json{
          {"arm", k},
          {"label", bank[k].label},
          {"accepts", counts.accepts[k]},
          {"shots", counts.shots_per_arm},
          {"rate", static_cast<double>(counts.accepts[k]) /
                       static_cast<double>(counts.shots_per_arm)}});
    out = qrec::Json{{"mode", "beam"},
                     {"seed", seed},
                     {"shots_per_arm", shots},
                     {"epsilon", res.epsilon},
                     {"accepted", res.accepted},
                     {"score", res.score},
                     {"best_index",
                      res.best_index ? qrec::Json(*res.best_index)
                                     : qrec::Json(nullptr)},
                     {"label", label ? qrec::Json(*label) : qrec::Json(nullptr)},
                     {"arms", std::move(arms)}};
    if (!counts_path.empty())
      write_file(counts_path, qrec::trial_counts_csv(counts, bank));
  } else {
    if (!counts_path.empty())
      throw qrec::ConfigError(
          "--counts applies to beam banks only (per-arm counts do not exist "
          "for the single-shot recognizer)");
    const qrec::OrthoMemory memory = qrec::memory_from_json(mj);
    const std::vector<double> probs =
        qrec::outcome_probabilities(query, memory);
    qrec::RngStream g = qrec::make_stream(seed);
    res = qrec::recognize_single_shot(memory, query, g, epsilon);
    if (res.best_index) label = memory.labels()[*res.best_index];
    double unknown = 0;
    for (std::size_t i = memory.stored_count(); i < probs.size(); ++i)
      unknown += probs[i];
    qrec::Json jp = qrec::Json::array();
    for (std::size_t i = 0; i < memory.stored_count(); ++i)
      jp.push_back(qrec::Json{{"label", memory.labels()[i]},
                              {"probability", probs[i]}});
    out = qrec::Json{{"mode", "ortho"},
                     {"seed", seed},
                     {"epsilon", res.epsilon},
                     {"accepted", res.accepted},
                     {"score", res.score},
                     {"best_index",
                      res.best_index ? qrec::Json(*res.best_index)
                                     : qrec::Json(nullptr)},
                     {"label", label ? qrec::Json(*label) : qrec::Json(nullptr)},
                     {"outcomes", std::move(jp)},
                     {"unknown_probability", unknown}};
  }

  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) write_file(out_path, text);
  if (res.accepted)
    std::cerr << "accepted " << *label << " (score "
              << qrec::format_double(res.score) << ")\n";
  else if (label)
    std::cerr << "rejected (best " << *label << ", score "
              << qrec::format_double(res.score) << ")\n";
  else
    std::cerr << "rejected (unknown image)\n";
  return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_base,
                  unsigned jobs, bool timing) {
  const qrec::BenchmarkConfig cfg =
      qrec::BenchmarkConfig::from_json(qrec::parse_json_text(read_file(config_path)));
  const qrec::BenchmarkReport report = qrec::run_benchmark(cfg, jobs, timing);
  const std::string csv = report.to_csv();
  write_file(out_base + ".csv", csv);
  write_file(out_base + ".json", report.to_json().dump(2) + "\n");
  std::cout << csv;
  std::cerr << "wrote " << out_base << ".csv and " << out_base << ".json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analogue quantum image recognition simulator"};
  app.require_subcommand(1);

  std::string format_flag;
  const auto add_format = [&format_flag](CLI::App* sub) {
    sub->add_option("--format", format_flag,
                    "input image format (pgm or csv); inferred when omitted")
        ->check(CLI::IsMember({"pgm", "csv"}));
  };

  // encode
  auto* enc = app.add_subcommand("encode",
                                 "parse an image, center and normalize it, "
                                 "print the state JSON");
  std::string enc_image;
  enc->add_option("image", enc_image, "image file (PGM or CSV)")->required();
  add_format(enc);

  // store
  auto* st = app.add_subcommand("store",
                                "build a memory file from one or more images");
  std::vector<std::string> st_images;
  std::string st_mode = "beam";
  std::string st_out;
  double st_intensity = 1.0;
  st->add_option("images", st_images, "image files")->required();
  st->add_option("--mode", st_mode, "recognizer the file is for")
      ->check(CLI::IsMember({"beam", "ortho"}));
  st->add_option("--out", st_out, "output memory file")->required();
  st->add_option("--intensity", st_intensity,
                 "input beam intensity (beam mode)");
  add_format(st);

  // recognize
  auto* rec = app.add_subcommand("recognize",
                                 "run a query image against a memory file");
  std::string rec_memory, rec_query, rec_mode, rec_out, rec_counts;
  std::uint64_t rec_shots = 1000;
  double rec_epsilon = 0.1;
  std::uint64_t rec_seed = 0;
  rec->add_option("memory", rec_memory, "memory file from `store`")->required();
  rec->add_option("query", rec_query, "query image file")->required();
  rec->add_option("--mode", rec_mode,
                  "cross-check that the memory file matches this recognizer")
      ->check(CLI::IsMember({"beam", "ortho"}));
  rec->add_option("--shots", rec_shots, "probes per arm (beam)");
  rec->add_option("--epsilon", rec_epsilon, "acceptance threshold in (0, 1)");
  rec->add_option("--seed", rec_seed, "RNG seed");
  rec->add_option("--out", rec_out, "also write the result JSON here");
  rec->add_option("--counts", rec_counts,
                  "write the per-arm accept counts CSV here (beam)");
  add_format(rec);

  // benchmark
  auto* bench = app.add_subcommand("benchmark",
                                   "run the recognition benchmark from a "
                                   "config JSON");
  std::string bench_config;
  std::string bench_out = "benchmark_report";
  unsigned bench_jobs = 1;
  bool bench_timing = false;
  bench->add_option("config", bench_config, "benchmark config JSON")
      ->required();
  bench->add_option("--out", bench_out,
                    "output basename (writes <out>.csv and <out>.json)");
  bench->add_option("--jobs", bench_jobs, "cells evaluated concurrently")
      ->check(CLI::Range(1u, 256u));
  bench->add_flag("--timing", bench_timing,
                  "fill the seconds column with wall-clock measurements "
                  "(makes report files non-reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (enc->parsed()) return cmd_encode(enc_image, format_flag);
    if (st->parsed())
      return cmd_store(st_images, st_mode, st_out, format_flag, st_intensity);
    if (rec->parsed())
      return cmd_recognize(rec_memory, rec_query, rec_mode, format_flag,
                           rec_shots, rec_epsilon, rec_seed, rec_out,
                           rec_counts);
    if (bench->parsed())
      return cmd_benchmark(bench_config, bench_out, bench_jobs, bench_timing);
  } catch (const qrec::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qrec::LinearDependenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qrec::InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qrec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
