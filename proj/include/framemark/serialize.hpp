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

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "framemark/bench.hpp"
#include "framemark/channel.hpp"
#include "framemark/detection.hpp"
#include "framemark/error.hpp"
#include "framemark/frame.hpp"
#include "framemark/localization.hpp"

namespace framemark {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; used for CSV cells.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_number: conversion failed");
  return std::string(buf, end);
}

inline Json to_json(const DetectionReport& r) {
  Json j;
  j["L"] = r.total_bits;
  j["bit_accuracy"] = r.bit_accuracy;
  if (r.word_accuracy) j["word_accuracy"] = *r.word_accuracy;
  j["log10_p"] = r.log10_p;
  return j;
}

inline Json to_json(const TamperEvent& e) {
  Json j;
  j["kind"] = to_string(e.kind);
  j["positions"] = e.positions;
  j["template_indices"] = e.template_indices;
  return j;
}

inline Json to_json(const LocalizationResult& r, const std::vector<TamperEvent>& events) {
  Json j;
  j["predicted"] = r.predicted;
  j["similarities"] = r.per_frame_similarity;
  j["accuracy"] = r.accuracy;
  Json ev = Json::array();
  for (const auto& e : events) ev.push_back(to_json(e));
  j["events"] = std::move(ev);
  return j;
}

inline Json to_json(const TamperSpec& s) {
  Json j;
  Json pairs = Json::array();
  for (const auto& [a, b] : s.swap_pairs) pairs.push_back(Json::array({a, b}));
  j["swap_pairs"] = std::move(pairs);
  j["drop_indices"] = s.drop_indices;
  j["insert_count"] = s.insert_count;
  if (!s.insert_positions.empty()) j["insert_positions"] = s.insert_positions;
  j["seed"] = s.rng_seed;
  return j;
}

inline TamperSpec tamper_spec_from_json(const Json& j) {
  TamperSpec s;
  try {
    for (const auto& p : j.value("swap_pairs", Json::array())) {
      if (!p.is_array() || p.size() != 2) throw Error("swap_pairs: each entry must be a pair");
      s.swap_pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    }
    s.drop_indices = j.value("drop_indices", std::vector<std::size_t>{});
    s.insert_count = j.value("insert_count", std::size_t{0});
    s.insert_positions = j.value("insert_positions", std::vector<std::size_t>{});
    s.rng_seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("tamper spec: ") + e.what());
  }
  return s;
}

inline Json to_json(const ChannelModel& c) {
  Json j;
  j["name"] = c.name();
  j["kind"] = c.kind() == ChannelKind::kIid ? "iid" : "burst";
  j["ber"] = c.ber();
  if (c.kind() == ChannelKind::kBurst) {
    j["p_good_to_bad"] = c.burst_params().p_good_to_bad;
    j["p_bad_to_good"] = c.burst_params().p_bad_to_good;
    j["ber_bad"] = c.burst_params().ber_bad;
  }
  return j;
}

/// Accepts a preset name, {"kind": "iid", "ber"}, or {"kind": "burst",
/// "p_good_to_bad", "p_bad_to_good", "ber_bad"} / {"kind": "burst",
/// "marginal_ber", "mean_burst_length", "ber_bad"}.
inline ChannelModel channel_from_json(const Json& j) {
  if (j.is_string()) return preset(j.get<std::string>());
  if (!j.is_object()) throw Error("channel: expected a preset name or an object");
  try {
    const auto kind = j.value("kind", std::string("iid"));
    const auto name = j.value("name", kind);
    if (kind == "iid") return ChannelModel::iid(name, j.at("ber").get<double>());
    if (kind == "burst") {
      if (j.contains("marginal_ber")) {
        return ChannelModel::gilbert_elliott(name, j.at("marginal_ber").get<double>(),
                                             j.at("mean_burst_length").get<double>(), j.at("ber_bad").get<double>());
      }
      return ChannelModel::burst(name, {j.at("p_good_to_bad").get<double>(), j.at("p_bad_to_good").get<double>(),
                                        j.at("ber_bad").get<double>()});
    }
    throw Error("channel: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("channel: ") + e.what());
  }
}

inline Json to_json(const EmbedParams& p) {
  Json j;
  j["pn_seed"] = p.pn_seed;
  j["alpha"] = p.alpha;
  j["block_size"] = p.block_size;
  j["bits_per_frame"] = p.bits_per_frame;
  Json mid = Json::array();
  for (const auto& c : p.midband) mid.push_back(Json::array({c.u, c.v}));
  j["midband"] = std::move(mid);
  return j;
}

inline EmbedParams embed_params_from_json(const Json& j) {
  EmbedParams p;
  try {
    p.pn_seed = j.at("pn_seed").get<std::uint64_t>();
    p.alpha = j.at("alpha").get<double>();
    p.block_size = j.at("block_size").get<std::size_t>();
    p.bits_per_frame = j.at("bits_per_frame").get<std::size_t>();
    p.midband.clear();
    for (const auto& c : j.at("midband")) p.midband.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("embed params: ") + e.what());
  }
  validate(p);
  return p;
}

inline Json to_json(const SimReport& r, bool include_trials) {
  Json j;
  j["channel"] = r.channel;
  j["attack"] = r.attack;
  j["family"] = r.attack_family;
  j["level"] = r.attack_level;
  j["tau"] = r.tau;
  j["trials"] = r.trials;
  j["master_seed"] = r.master_seed;
  Json s;
  s["mean_bit_accuracy"] = r.summary.mean_bit_accuracy;
  s["mean_log10_p"] = r.summary.mean_log10_p;
  s["mean_localization_accuracy"] = r.summary.mean_localization_accuracy;
  if (r.summary.word_accuracy_uncoded) s["word_accuracy_uncoded"] = *r.summary.word_accuracy_uncoded;
  if (r.summary.word_accuracy_ldpc) s["word_accuracy_ldpc"] = *r.summary.word_accuracy_ldpc;
  s["pooled"] = to_json(r.summary.pooled);
  j["summary"] = std::move(s);
  if (include_trials) {
    Json trials = Json::array();
    for (const auto& t : r.per_trial) {
      Json tj;
      tj["tamper"] = to_json(t.tamper);
      tj["truth"] = t.truth;
      tj["detection"] = to_json(t.detection);
      tj["localization"] = to_json(t.localization, {});
      if (t.word_accuracy_uncoded) tj["word_accuracy_uncoded"] = *t.word_accuracy_uncoded;
      if (t.word_accuracy_ldpc) tj["word_accuracy_ldpc"] = *t.word_accuracy_ldpc;
      trials.push_back(std::move(tj));
    }
    j["per_trial"] = std::move(trials);
  }
  return j;
}

inline Json to_json(const BenchRow& row) {
  Json j;
  j["distortion"] = row.distortion;
  j["status"] = row.status == DistortionStatus::kApplied ? "applied" : "skipped";
  if (!row.message.empty()) j["message"] = row.message;
  if (row.report) j["report"] = to_json(*row.report);
  return j;
}

inline const char* sim_csv_header() {
  return "channel,attack,family,level,tau,trials,bit_accuracy,log10_p,word_accuracy_uncoded,word_accuracy_ldpc,"
         "localization_accuracy\n";
}

inline std::string to_csv_row(const SimReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  return r.channel + "," + r.attack + "," + r.attack_family + "," + std::to_string(r.attack_level) + "," +
         format_number(r.tau) + "," + std::to_string(r.trials) + "," +
         format_number(r.summary.mean_bit_accuracy) + "," + format_number(r.summary.mean_log10_p) + "," +
         opt(r.summary.word_accuracy_uncoded) + "," + opt(r.summary.word_accuracy_ldpc) + "," +
         format_number(r.summary.mean_localization_accuracy) + "\n";
}

inline const char* sweep_csv_header() { return "channel,attack,tau,trials,localization_accuracy\n"; }

inline std::string to_csv_row(const std::string& channel, const SweepRow& row) {
  return channel + "," + row.attack + "," + format_number(row.tau) + "," + std::to_string(row.trials) + "," +
         format_number(row.accuracy) + "\n";
}

inline const char* bench_csv_header() { return "distortion,status,L,bit_accuracy,word_accuracy,log10_p\n"; }

inline std::string to_csv_row(const BenchRow& row) {
  std::string out = row.distortion + "," + (row.status == DistortionStatus::kApplied ? "applied" : "skipped");
  if (row.report) {
    out += "," + std::to_string(row.report->total_bits) + "," + format_number(row.report->bit_accuracy) + "," +
           (row.report->word_accuracy ? format_number(*row.report->word_accuracy) : std::string()) + "," +
           format_number(row.report->log10_p);
  } else {
    out += ",,,,";
  }
  return out + "\n";
}

}  // namespace framemark
