// Copyright 2026 The Framemark Authors
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framemark.hpp"
#include "run_report.hpp"

namespace fm = framemark;
namespace fs = std::filesystem;
using fm::Json;
using fm::cli::RunReport;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string manifest;
  std::string out;
  std::string format = "json";
  std::optional<double> tau;
  std::size_t threads = 0;
  std::vector<std::string> argv;
};

void write_output(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    fm::write_text_file(g.out, text);
  }
}

void emit(const Globals& g, const RunReport& report, const std::optional<std::string>& csv) {
  if (g.format == "csv") {
    if (!csv) throw fm::Error("this command has no CSV projection; use --format json");
    write_output(g, *csv);
  } else {
    write_output(g, report.to_json().dump(2) + "\n");
  }
  report.log_duration();
}

fm::Manifest require_manifest(const Globals& g) {
  if (g.manifest.empty()) throw fm::Error("--manifest is required");
  return fm::load_manifest(g.manifest);
}

double effective_tau(const Globals& g, const fm::Manifest& m) {
  const double tau = g.tau.value_or(m.tau);
  if (!(tau >= 0.0 && tau <= 1.0)) throw fm::Error("--tau must lie in [0, 1]");
  return tau;
}

std::vector<fm::DataWord> load_words(const std::string& path, std::size_t k) {
  std::vector<fm::DataWord> out;
  for (auto& b : fm::parse_hex_lines(fm::read_text_file(path), k, "payload file")) out.emplace_back(std::move(b));
  return out;
}

std::vector<fm::BitString> extract_keys(const std::vector<fm::Frame>& frames, const fm::EmbedParams& params,
                                        std::size_t threads) {
  std::vector<fm::BitString> keys(frames.size(), fm::BitString(std::vector<std::uint8_t>{0}));
  fm::parallel_for(frames.size(), threads, [&](std::size_t i) { keys[i] = fm::extract_frame(frames[i], params); });
  return keys;
}

/// Keys from --keys (file) or --frames (directory), recorded as inputs.
std::vector<fm::BitString> load_keys(const Globals& g, const fm::Manifest& m, const std::string& keys_path,
                                     const std::string& frames_dir, RunReport& report) {
  if (keys_path.empty() == frames_dir.empty()) throw fm::Error("give exactly one of --keys or --frames");
  if (!keys_path.empty()) {
    report.add_input("keys", keys_path);
    return fm::parse_hex_lines(fm::read_text_file(keys_path), m.templates.key_length(), "keys file");
  }
  report.add_input("frames", frames_dir, true);
  return extract_keys(fm::read_frame_dir(frames_dir), m.embed, g.threads);
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto end = std::min(spec.find(':', start), spec.size());
    try {
      std::size_t used = 0;
      const auto text = spec.substr(start, end - start);
      parts.push_back(std::stod(text, &used));
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw fm::Error("--tau-sweep: expected start:stop:step, got '" + spec + "'");
    }
    start = end + 1;
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw fm::Error("--tau-sweep: expected start:stop:step with step > 0 and stop >= start");
  }
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = std::round((parts[0] + static_cast<double>(i) * parts[2]) * 1e9) / 1e9;
    if (v > parts[1] + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::size_t count = 16;
  std::size_t d = 48;
  std::optional<std::size_t> min_distance;
  std::size_t k_data = 16;
  std::size_t n_code = 48;
  double alpha = fm::kDefaultAlpha;
  std::optional<std::uint64_t> pn_seed;
  std::string payloads_out;
  std::optional<std::size_t> frames;
};

int cmd_keygen(const Globals& g, const KeygenArgs& a) {
  const auto min_distance = a.min_distance.value_or(a.d / 3);
  auto code = fm::build_ldpc(g.seed, a.k_data, a.n_code);
  auto templates = a.d == a.n_code ? fm::generate_codeword_templates(code, a.count, g.seed, min_distance)
                                   : fm::generate_templates(a.count, a.d, g.seed, min_distance);
  fm::EmbedParams embed;
  embed.bits_per_frame = a.n_code;
  embed.alpha = a.alpha;
  embed.pn_seed = a.pn_seed.value_or(fm::derive_seed(g.seed, "pn"));
  fm::validate(embed);
  const double tau = g.tau.value_or(fm::kDefaultTau);
  if (!(tau >= 0.0 && tau <= 1.0)) throw fm::Error("--tau must lie in [0, 1]");
  fm::Manifest m{g.seed, a.k_data, a.n_code, std::move(templates), embed, tau};

  if (!a.payloads_out.empty()) {
    if (!m.codeword_keys()) throw fm::Error("--payloads-out needs codeword keys (d equal to n_code)");
    const auto n = a.frames.value_or(m.templates.size());
    if (n == 0) throw fm::Error("--frames must be >= 1");
    std::vector<fm::BitString> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back(m.templates.data_words()[i % m.templates.size()]);
    fm::write_text_file(a.payloads_out, fm::format_hex_lines(words));
  }
  write_output(g, fm::manifest_text(m));
  return 0;
}

struct EmbedArgs {
  std::string frames;
  std::string payloads;
  std::string out_dir;
};

int cmd_embed(const Globals& g, const EmbedArgs& a) {
  RunReport report("embed", g.argv, g.seed);
  const auto m = require_manifest(g);
  report.set_manifest(m);
  report.add_input("frames", a.frames, true);
  report.add_input("payloads", a.payloads);
  const auto clip = fm::read_frame_dir(a.frames);
  const auto words = load_words(a.payloads, m.k_data);
  const auto code = m.code();
  const auto embedded = fm::embed_clip(clip, words, code, m.embed, g.threads);
  fm::write_frame_dir(a.out_dir, embedded.frames);

  auto& r = report.result();
  r["frames"] = embedded.frames.size();
  r["out_dir"] = a.out_dir;
  r["psnr"] = embedded.psnr;
  double sum = 0.0;
  double lo = embedded.psnr.front();
  for (double p : embedded.psnr) {
    sum += p;
    lo = std::min(lo, p);
  }
  r["mean_psnr"] = sum / static_cast<double>(embedded.psnr.size());
  r["min_psnr"] = lo;
  std::string csv = "frame,psnr\n";
  for (std::size_t i = 0; i < embedded.psnr.size(); ++i) {
    csv += std::to_string(i) + "," + fm::format_number(embedded.psnr[i]) + "\n";
  }
  emit(g, report, csv);
  return 0;
}

struct ExtractArgs {
  std::string frames;
  std::string keys_out;
};

int cmd_extract(const Globals& g, const ExtractArgs& a) {
  RunReport report("extract", g.argv, g.seed);
  const auto m = require_manifest(g);
  report.set_manifest(m);
  report.add_input("frames", a.frames, true);
  const auto keys = extract_keys(fm::read_frame_dir(a.frames), m.embed, g.threads);
  if (!a.keys_out.empty()) fm::write_text_file(a.keys_out, fm::format_hex_lines(keys));
  Json list = Json::array();
  std::string csv = "frame,key\n";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    list.push_back(keys[i].to_hex());
    csv += std::to_string(i) + "," + keys[i].to_hex() + "\n";
  }
  report.result()["keys"] = std::move(list);
  emit(g, report, csv);
  return 0;
}

struct VerifyArgs {
  std::string keys;
  std::string frames;
  std::string payloads;
  double threshold = -6.0;
  std::string channel;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  RunReport report("verify", g.argv, g.seed);
  const auto m = require_manifest(g);
  report.set_manifest(m);
  auto keys = load_keys(g, m, a.keys, a.frames, report);
  report.add_input("payloads", a.payloads);
  const auto words = load_words(a.payloads, m.k_data);
  if (words.size() != keys.size()) {
    throw fm::Error(std::to_string(words.size()) + " payload words for " + std::to_string(keys.size()) + " frames");
  }
  if (m.templates.key_length() != m.n_code) throw fm::Error("verify needs keys of length n_code");
  const auto code = m.code();
  if (!a.channel.empty()) {
    const auto channel = fm::preset(a.channel);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto rng = fm::channel_stream(g.seed, 0, i);
      keys[i] = fm::flip_bits(keys[i], channel, rng);
    }
  }
  std::vector<fm::Codeword> sent;
  for (const auto& w : words) sent.push_back(code.encode(w));
  const auto det = fm::score_extraction(keys, sent, code);
  const bool detected = det.log10_p < a.threshold;

  auto& r = report.result();
  r["detection"] = fm::to_json(det);
  if (!a.channel.empty()) r["channel"] = a.channel;
  r["threshold"] = a.threshold;
  r["detected"] = detected;
  std::string csv = std::string("input,detected,L,bit_accuracy,word_accuracy,log10_p\n") +
                    (a.keys.empty() ? a.frames : a.keys) + "," + (detected ? "true" : "false") + "," +
                    std::to_string(det.total_bits) + "," + fm::format_number(det.bit_accuracy) + "," +
                    (det.word_accuracy ? fm::format_number(*det.word_accuracy) : std::string()) + "," +
                    fm::format_number(det.log10_p) + "\n";
  emit(g, report, csv);
  return detected ? 0 : 1;
}

struct LocalizeArgs {
  std::string keys;
  std::string frames;
  std::string truth;
  std::optional<std::size_t> expected_frames;
  std::string tau_sweep;
  std::string channel = "clean";
  std::size_t trials = 1000;
  std::optional<std::size_t> sim_frames;
};

int cmd_localize_sweep(const Globals& g, const LocalizeArgs& a, const fm::Manifest& m, RunReport& report) {
  fm::SimConfig config;
  config.templates = std::make_shared<const fm::TemplateSet>(m.templates);
  config.frames = a.sim_frames.value_or(m.templates.size());
  config.channel = fm::preset(a.channel);
  config.trials = a.trials;
  config.master_seed = g.seed;
  config.decode_words = false;
  config.threads = g.threads;
  const auto rows = fm::threshold_sweep(config, parse_range(a.tau_sweep), fm::threshold_study_attacks());
  std::string csv = fm::sweep_csv_header();
  Json list = Json::array();
  for (const auto& row : rows) {
    csv += fm::to_csv_row(config.channel.name(), row);
    list.push_back(Json{{"attack", row.attack}, {"tau", row.tau}, {"trials", row.trials}, {"accuracy", row.accuracy}});
  }
  auto& r = report.result();
  r["channel"] = fm::to_json(config.channel);
  r["frames"] = config.frames;
  r["sweep"] = std::move(list);
  emit(g, report, csv);
  return 0;
}

int cmd_localize(const Globals& g, const LocalizeArgs& a) {
  RunReport report("localize", g.argv, g.seed);
  const auto m = require_manifest(g);
  report.set_manifest(m);
  if (!a.tau_sweep.empty()) return cmd_localize_sweep(g, a, m, report);

  const double tau = effective_tau(g, m);
  const fm::FrameKeyMatrix keys(load_keys(g, m, a.keys, a.frames, report));
  const std::size_t expected_len = a.expected_frames.value_or(m.templates.size());
  if (expected_len == 0) throw fm::Error("--expected-frames must be >= 1");
  std::vector<long> expected(expected_len);
  for (std::size_t i = 0; i < expected_len; ++i) expected[i] = static_cast<long>(i % m.templates.size());

  Json loc;
  std::vector<long> predicted;
  if (!a.truth.empty()) {
    report.add_input("truth", a.truth);
    const auto result = fm::localize(m.templates, keys, fm::parse_truth(fm::read_text_file(a.truth)), tau);
    predicted = result.predicted;
    loc = fm::to_json(result, fm::diagnose(predicted, expected));
  } else {
    const auto matching = fm::match_frames(m.templates, keys, tau);
    predicted = matching.predicted;
    loc = fm::to_json(fm::LocalizationResult{matching.predicted, matching.similarity, 0.0},
                      fm::diagnose(predicted, expected));
    loc.erase("accuracy");
  }
  const bool tampered = !loc["events"].empty();
  auto& r = report.result();
  r["tau"] = tau;
  r["localization"] = loc;
  r["tampered"] = tampered;
  std::string csv = "position,predicted,similarity\n";
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(predicted[i]) + "," +
           fm::format_number(loc["similarities"][i].get<double>()) + "\n";
  }
  emit(g, report, csv);
  return tampered ? 1 : 0;
}

// ---------------------------------------------------------------------------
// simulate

template <class T>
T field(const Json& j, const std::string& name, const std::string& where) {
  if (!j.contains(name)) throw fm::Error(where + "." + name + ": missing");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw fm::Error(where + "." + name + ": wrong type");
  }
}

template <class T>
T field_or(const Json& j, const std::string& name, const std::string& where, T fallback) {
  return j.contains(name) ? field<T>(j, name, where) : fallback;
}

std::vector<fm::ChannelModel> config_channels(const Json& cfg) {
  std::vector<fm::ChannelModel> out;
  const Json channels = cfg.contains("channels") ? cfg.at("channels") : Json("all");
  if (channels.is_string() && channels.get<std::string>() == "all") {
    for (const auto& p : fm::kChannelPresets) out.push_back(fm::preset(p.name));
    return out;
  }
  if (!channels.is_array() || channels.empty()) throw fm::Error("config.channels: expected \"all\" or a list");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    try {
      out.push_back(fm::channel_from_json(channels[i]));
    } catch (const fm::Error& e) {
      throw fm::Error("config.channels[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

std::vector<fm::AttackRecipe> config_attacks(const Json& cfg) {
  std::vector<fm::AttackRecipe> out;
  if (!cfg.contains("attacks")) return {fm::AttackRecipe{}};
  const auto& attacks = cfg.at("attacks");
  if (!attacks.is_array() || attacks.empty()) throw fm::Error("config.attacks: expected a non-empty list");
  for (std::size_t i = 0; i < attacks.size(); ++i) {
    const auto where = "config.attacks[" + std::to_string(i) + "]";
    const auto& a = attacks[i];
    const auto family = field<std::string>(a, "family", where);
    std::vector<std::size_t> levels;
    if (a.contains("levels")) {
      levels = field<std::vector<std::size_t>>(a, "levels", where);
    } else {
      levels.push_back(field_or<std::size_t>(a, "level", where, family == "none" ? 0 : 1));
    }
    if (levels.empty()) throw fm::Error(where + ".levels: empty");
    for (auto level : levels) {
      try {
        out.push_back(fm::attack_recipe(family, level));
      } catch (const fm::Error& e) {
        throw fm::Error(where + ": " + e.what());
      }
    }
  }
  return out;
}

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  bool per_trial = false;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
  RunReport report("simulate", g.argv, g.seed);
  report.add_input("config", a.config);
  Json cfg;
  try {
    cfg = Json::parse(fm::read_text_file(a.config));
  } catch (const nlohmann::json::exception& e) {
    throw fm::Error("config: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw fm::Error("config: expected a JSON object");
  const std::string where = "config";
  const auto master_seed = field_or<std::uint64_t>(cfg, "master_seed", where, g.seed);
  report.result()["master_seed"] = master_seed;

  std::shared_ptr<const fm::TemplateSet> templates;
  std::shared_ptr<const fm::LdpcCode> code;
  if (!g.manifest.empty()) {
    const auto m = fm::load_manifest(g.manifest);
    report.set_manifest(m);
    templates = std::make_shared<const fm::TemplateSet>(m.templates);
    code = std::make_shared<const fm::LdpcCode>(m.code());
  } else {
    const Json ldpc = cfg.value("ldpc", Json::object());
    const auto ldpc_seed = field_or<std::uint64_t>(ldpc, "seed", where + ".ldpc", master_seed);
    code = std::make_shared<const fm::LdpcCode>(fm::build_ldpc(
        ldpc_seed, field_or<std::size_t>(ldpc, "k", where + ".ldpc", 16), field_or<std::size_t>(ldpc, "n", where + ".ldpc", 48)));
    const Json t = cfg.value("templates", Json::object());
    const auto tw = where + ".templates";
    const auto count = field_or<std::size_t>(t, "M", tw, 16);
    const auto d = field_or<std::size_t>(t, "d", tw, code->n_code());
    const auto min_distance = field_or<std::size_t>(t, "min_distance", tw, d / 3);
    const auto tseed = field_or<std::uint64_t>(t, "seed", tw, master_seed);
    templates = std::make_shared<const fm::TemplateSet>(
        d == code->n_code() ? fm::generate_codeword_templates(*code, count, tseed, min_distance)
                            : fm::generate_templates(count, d, tseed, min_distance));
  }

  std::vector<double> taus;
  if (g.tau) {
    taus.push_back(*g.tau);
  } else if (cfg.contains("tau") && cfg.at("tau").is_array()) {
    taus = field<std::vector<double>>(cfg, "tau", where);
  } else {
    taus.push_back(field_or<double>(cfg, "tau", where, fm::kDefaultTau));
  }
  for (double tau : taus) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw fm::Error("config.tau: values must lie in [0, 1]");
  }

  fm::SimConfig base;
  base.templates = templates;
  base.code = code;
  base.frames = field_or<std::size_t>(cfg, "frames", where, templates->size());
  base.trials = field_or<std::size_t>(cfg, "trials", where, 1000);
  base.master_seed = master_seed;
  base.decode_words = field_or<bool>(cfg, "decode_words", where, true);
  base.threads = g.threads;
  if (cfg.contains("tamper")) base.fixed_tamper = fm::tamper_spec_from_json(cfg.at("tamper"));
  const auto channels = config_channels(cfg);
  const auto attacks = base.fixed_tamper ? std::vector<fm::AttackRecipe>{fm::AttackRecipe{}} : config_attacks(cfg);

  std::string csv = fm::sim_csv_header();
  std::map<std::string, std::string> family_csv;
  Json reports = Json::array();
  for (const auto& channel : channels) {
    for (const auto& attack : attacks) {
      for (double tau : taus) {
        auto config = base;
        config.channel = channel;
        config.attack = attack;
        config.tau = tau;
        const auto sim = fm::simulate_pipeline(config);
        std::fprintf(stderr, "simulate: %s / %s / tau=%g done\n", sim.channel.c_str(), sim.attack.c_str(), tau);
        auto row = fm::to_csv_row(sim);
        csv += row;
        auto& fam = family_csv[sim.attack_family];
        if (fam.empty()) fam = fm::sim_csv_header();
        fam += row;
        reports.push_back(fm::to_json(sim, a.per_trial));
      }
    }
  }
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    for (const auto& [family, text] : family_csv) {
      fm::write_text_file((fs::path(a.out_dir) / (family + ".csv")).string(), text);
    }
  }
  report.result()["reports"] = std::move(reports);
  emit(g, report, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string frames;
  std::string payloads;
  std::vector<std::string> distortions;
};

int cmd_bench(const Globals& g, const BenchArgs& a) {
  RunReport report("bench", g.argv, g.seed);
  const auto m = require_manifest(g);
  report.set_manifest(m);
  report.add_input("frames", a.frames, true);
  const auto clip = fm::read_frame_dir(a.frames);
  std::vector<fm::DataWord> words;
  if (!a.payloads.empty()) {
    report.add_input("payloads", a.payloads);
    words = load_words(a.payloads, m.k_data);
  } else {
    auto rng = fm::substream(g.seed, "bench-payloads");
    for (std::size_t i = 0; i < clip.size(); ++i) words.emplace_back(fm::random_bits(m.k_data, rng));
  }
  std::vector<fm::DistortionSpec> specs;
  if (a.distortions.empty()) {
    specs = fm::standard_distortion_suite(g.seed);
  } else {
    for (const auto& label : a.distortions) {
      if (label != "clean") specs.push_back(fm::distortion_by_label(label, g.seed));
    }
  }
  const auto code = m.code();
  const bool want_clean = a.distortions.empty() ||
                          std::find(a.distortions.begin(), a.distortions.end(), "clean") != a.distortions.end();
  const auto rows = fm::run_robustness_bench(clip, words, code, m.embed, specs, g.threads, want_clean);
  std::string csv = fm::bench_csv_header();
  Json list = Json::array();
  for (const auto& row : rows) {
    csv += fm::to_csv_row(row);
    list.push_back(fm::to_json(row));
    if (row.status == fm::DistortionStatus::kSkipped) {
      std::fprintf(stderr, "bench: %s skipped: %s\n", row.distortion.c_str(), row.message.c_str());
    }
  }
  report.result()["rows"] = std::move(list);
  emit(g, report, csv);
  return 0;
}

// ---------------------------------------------------------------------------

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--seed", g.seed, "Master seed for every random stream");
  app.add_option("--manifest", g.manifest, "Manifest JSON written by keygen");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tau", g.tau, "Similarity threshold (default: manifest value)");
  app.add_option("--threads", g.threads, "Worker threads, 0 = hardware concurrency");
}

int run(int argc, char** argv) {
  CLI::App app{"Frame watermark toolkit: key generation, embedding, verification and tamper localization"};
  app.require_subcommand(1);
  Globals g;
  for (int i = 1; i < argc; ++i) g.argv.emplace_back(argv[i]);
  add_globals(app, g);

  KeygenArgs keygen;
  auto* kg = app.add_subcommand("keygen", "Generate template keys and write a manifest");
  kg->add_option("-M,--count", keygen.count, "Number of template keys");
  kg->add_option("-d,--length", keygen.d, "Key length in bits (equal to n_code for codeword keys)");
  kg->add_option("--min-distance", keygen.min_distance, "Minimum pairwise Hamming distance (default d/3)");
  kg->add_option("--k-data", keygen.k_data, "LDPC data bits");
  kg->add_option("--n-code", keygen.n_code, "LDPC block length");
  kg->add_option("--alpha", keygen.alpha, "Embedding strength");
  kg->add_option("--pn-seed", keygen.pn_seed, "Embedder pattern seed (default derived from --seed)");
  kg->add_option("--payloads-out", keygen.payloads_out, "Write the template data words, one per frame");
  kg->add_option("--frames", keygen.frames, "Frames listed in --payloads-out (default M)");

  EmbedArgs embed;
  auto* em = app.add_subcommand("embed", "Watermark a directory of frames");
  em->add_option("--frames", embed.frames, "Input frame directory")->required();
  em->add_option("--payloads", embed.payloads, "Payload words, one hex word per frame")->required();
  em->add_option("--out-dir", embed.out_dir, "Output frame directory")->required();

  ExtractArgs extract;
  auto* ex = app.add_subcommand("extract", "Read the per-frame keys from frames");
  ex->add_option("--frames", extract.frames, "Frame directory")->required();
  ex->add_option("--keys-out", extract.keys_out, "Write the keys, one hex key per line");

  VerifyArgs verify;
  auto* ve = app.add_subcommand("verify", "Score extracted keys against expected payloads (exit 0 = detected)");
  ve->add_option("--keys", verify.keys, "Keys file from extract");
  ve->add_option("--frames", verify.frames, "Frame directory to extract from");
  ve->add_option("--payloads", verify.payloads, "Expected payload words")->required();
  ve->add_option("--threshold", verify.threshold, "Detect when log10 P is below this value");
  ve->add_option("--channel", verify.channel, "Pass the keys through a preset channel first");

  LocalizeArgs localize;
  auto* lo = app.add_subcommand("localize", "Match frames to templates and report tampering (exit 1 = tampered)");
  lo->add_option("--keys", localize.keys, "Keys file from extract");
  lo->add_option("--frames", localize.frames, "Frame directory to extract from");
  lo->add_option("--truth", localize.truth, "Ground-truth template index per frame (-1 = inserted)");
  lo->add_option("--expected-frames", localize.expected_frames, "Length of the untampered clip (default M)");
  lo->add_option("--tau-sweep", localize.tau_sweep, "Monte-Carlo threshold sweep start:stop:step");
  lo->add_option("--channel", localize.channel, "Channel preset for --tau-sweep");
  lo->add_option("--trials", localize.trials, "Trials per sweep cell");
  lo->add_option("--sim-frames", localize.sim_frames, "Clip length for --tau-sweep (default M)");

  SimulateArgs simulate;
  auto* si = app.add_subcommand("simulate", "Monte-Carlo channel and tamper simulation");
  si->add_option("--config", simulate.config, "Simulation config JSON")->required();
  si->add_option("--out-dir", simulate.out_dir, "Also write one CSV per attack family here");
  si->add_flag("--per-trial", simulate.per_trial, "Include per-trial results in the JSON report");

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "Embed, distort, extract and score a clip");
  be->add_option("--frames", bench.frames, "Input frame directory")->required();
  be->add_option("--payloads", bench.payloads, "Payload words (default: random from --seed)");
  be->add_option("--distortions", bench.distortions, "Distortion labels (default: clean plus the full suite)")
      ->delimiter(',');

  for (auto* sub : {kg, em, ex, ve, lo, si, be}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (kg->parsed()) return cmd_keygen(g, keygen);
    if (em->parsed()) return cmd_embed(g, embed);
    if (ex->parsed()) return cmd_extract(g, extract);
    if (ve->parsed()) return cmd_verify(g, verify);
    if (lo->parsed()) return cmd_localize(g, localize);
    if (si->parsed()) return cmd_simulate(g, simulate);
    if (be->parsed()) return cmd_bench(g, bench);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "framemark: error: %s\n", e.what());
    return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (...) {
    std::fprintf(stderr, "framemark: unexpected failure\n");
    return 2;
  }
}
