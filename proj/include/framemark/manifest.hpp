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

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"
#include "framemark/frame.hpp"
#include "framemark/ldpc.hpp"
#include "framemark/localization.hpp"
#include "framemark/rng.hpp"
#include "framemark/serialize.hpp"
#include "framemark/templates.hpp"

namespace framemark {

inline constexpr const char* kManifestVersion = "framemark-manifest/1";

/// Everything a verifier needs besides the frames: code parameters, the
/// template keys and the embedder settings.
struct Manifest {
  std::uint64_t seed = 0;
  std::size_t k_data = 16;
  std::size_t n_code = 48;
  TemplateSet templates;
  EmbedParams embed;
  double tau = kDefaultTau;

  bool codeword_keys() const noexcept { return templates.has_data_words(); }
  LdpcCode code() const { return build_ldpc(seed, k_data, n_code); }
};

inline Json to_json(const Manifest& m) {
  Json j;
  j["version"] = kManifestVersion;
  j["seed"] = m.seed;
  j["k_data"] = m.k_data;
  j["n_code"] = m.n_code;
  j["M"] = m.templates.size();
  j["d"] = m.templates.key_length();
  j["min_distance"] = m.templates.min_distance();
  j["template_seed"] = m.templates.seed();
  Json keys = Json::array();
  for (const auto& k : m.templates.keys()) keys.push_back(k.to_hex());
  j["keys"] = std::move(keys);
  if (m.codeword_keys()) {
    Json words = Json::array();
    for (const auto& w : m.templates.data_words()) words.push_back(w.to_hex());
    j["data_words"] = std::move(words);
  }
  j["embed"] = to_json(m.embed);
  j["tau"] = m.tau;
  return j;
}

inline std::string manifest_text(const Manifest& m) { return to_json(m).dump(2) + "\n"; }

inline std::uint64_t manifest_digest(const Manifest& m) { return fnv1a64(manifest_text(m)); }

inline Manifest manifest_from_json(const Json& j) {
  try {
    const auto version = j.at("version").get<std::string>();
    if (version != kManifestVersion) throw Error("manifest: unrecognized version '" + version + "'");
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto k = j.at("k_data").get<std::size_t>();
    const auto n = j.at("n_code").get<std::size_t>();
    const auto count = j.at("M").get<std::size_t>();
    const auto d = j.at("d").get<std::size_t>();
    std::vector<BitString> keys;
    for (const auto& h : j.at("keys")) keys.push_back(BitString::from_hex(h.get<std::string>(), d));
    if (keys.size() != count) {
      throw Error("manifest: M=" + std::to_string(count) + " but " + std::to_string(keys.size()) + " keys listed");
    }
    std::vector<BitString> words;
    if (j.contains("data_words")) {
      if (d != n) throw Error("manifest: codeword keys require d == n_code");
      for (const auto& h : j.at("data_words")) words.push_back(BitString::from_hex(h.get<std::string>(), k));
      const auto code = build_ldpc(seed, k, n);
      for (std::size_t i = 0; i < keys.size() && i < words.size(); ++i) {
        if (code.encode(DataWord(words[i])).bits() != keys[i]) {
          throw Error("manifest: key " + std::to_string(i) + " is not the codeword of its data word");
        }
      }
    }
    TemplateSet templates(std::move(keys), j.value("template_seed", seed), j.at("min_distance").get<std::size_t>(),
                          std::move(words));
    auto embed = embed_params_from_json(j.at("embed"));
    if (embed.bits_per_frame != n) throw Error("manifest: embed.bits_per_frame must equal n_code");
    const double tau = j.value("tau", kDefaultTau);
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error("manifest: tau must lie in [0, 1]");
    return Manifest{seed, k, n, std::move(templates), std::move(embed), tau};
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Plain-text files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

inline Manifest load_manifest(const std::string& path) {
  const auto text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest '" + path + "': " + e.what());
  }
  return manifest_from_json(j);
}

/// Non-blank lines with surrounding whitespace and '#' comments removed.
inline std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

/// One hex-encoded bit string per line, each `bits` long.
inline std::vector<BitString> parse_hex_lines(const std::string& text, std::size_t bits, const std::string& what) {
  std::vector<BitString> out;
  std::size_t line_no = 0;
  for (const auto& line : content_lines(text)) {
    ++line_no;
    try {
      out.push_back(BitString::from_hex(line, bits));
    } catch (const Error& e) {
      throw Error(what + " entry " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw Error(what + ": no entries");
  return out;
}

inline std::string format_hex_lines(const std::vector<BitString>& items) {
  std::string out;
  for (const auto& b : items) out += b.to_hex() + "\n";
  return out;
}

/// One template index per line; -1 marks an inserted frame.
inline GroundTruthSequence parse_truth(const std::string& text) {
  GroundTruthSequence out;
  for (const auto& line : content_lines(text)) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(line, &used);
    } catch (const std::exception&) {
      throw Error("truth file: '" + line + "' is not an integer");
    }
    if (used != line.size()) throw Error("truth file: '" + line + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw Error("truth file: no entries");
  return out;
}

}  // namespace framemark
