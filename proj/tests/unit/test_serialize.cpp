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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "framemark/manifest.hpp"
#include "framemark/serialize.hpp"

namespace fm = framemark;

namespace {

fm::Manifest sample_manifest(bool codewords) {
  const auto code = fm::build_ldpc(7, 16, 48);
  fm::EmbedParams embed;
  embed.pn_seed = 99;
  auto templates =
      codewords ? fm::generate_codeword_templates(code, 4, 7, 16) : fm::generate_templates(4, 12, 3, 4);
  return fm::Manifest{7, 16, 48, std::move(templates), embed, fm::kDefaultTau};
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(fm::format_number(0.1), "0.1");
  EXPECT_EQ(fm::format_number(1.0), "1");
  EXPECT_EQ(fm::format_number(-86.69700130825804), "-86.69700130825804");
  EXPECT_EQ(std::stod(fm::format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Json, DetectionReportFields) {
  const auto r = fm::make_report(48, 48, 1.0, 1);
  const auto j = fm::to_json(r);
  EXPECT_EQ(j["L"], 48);
  EXPECT_EQ(j["bit_accuracy"], 1.0);
  EXPECT_EQ(j["word_accuracy"], 1.0);
  EXPECT_NEAR(j["log10_p"].get<double>(), -48 * std::log10(2.0), 1e-9);
  EXPECT_FALSE(fm::to_json(fm::make_report(10, 5)).contains("word_accuracy"));
}

TEST(Json, TamperSpecRoundTrip) {
  fm::TamperSpec s;
  s.swap_pairs = {{0, 3}, {1, 2}};
  s.drop_indices = {4};
  s.insert_count = 2;
  s.insert_positions = {0, 5};
  s.rng_seed = 11;
  const auto back = fm::tamper_spec_from_json(fm::to_json(s));
  EXPECT_EQ(back.swap_pairs, s.swap_pairs);
  EXPECT_EQ(back.drop_indices, s.drop_indices);
  EXPECT_EQ(back.insert_count, s.insert_count);
  EXPECT_EQ(back.insert_positions, s.insert_positions);
  EXPECT_EQ(back.rng_seed, s.rng_seed);
  EXPECT_THROW(fm::tamper_spec_from_json(fm::Json::parse(R"({"swap_pairs": [[1]]})")), fm::Error);
  EXPECT_THROW(fm::tamper_spec_from_json(fm::Json::parse(R"({"drop_indices": "x"})")), fm::Error);
}

TEST(Json, ChannelForms) {
  EXPECT_NEAR(fm::channel_from_json("clean").ber(), 0.017, 1e-12);
  const auto iid = fm::channel_from_json(fm::Json::parse(R"({"kind": "iid", "ber": 0.05})"));
  EXPECT_EQ(iid.kind(), fm::ChannelKind::kIid);
  EXPECT_DOUBLE_EQ(iid.ber(), 0.05);
  const auto ge = fm::channel_from_json(
      fm::Json::parse(R"({"kind": "burst", "marginal_ber": 0.05, "mean_burst_length": 8, "ber_bad": 0.06})"));
  EXPECT_EQ(ge.kind(), fm::ChannelKind::kBurst);
  EXPECT_NEAR(ge.ber(), 0.05, 1e-12);
  const auto back = fm::channel_from_json(fm::to_json(ge));
  EXPECT_NEAR(back.burst_params().p_good_to_bad, ge.burst_params().p_good_to_bad, 1e-15);
  EXPECT_NEAR(back.burst_params().p_bad_to_good, ge.burst_params().p_bad_to_good, 1e-15);
  EXPECT_THROW(fm::channel_from_json("nonsense"), fm::Error);
  EXPECT_THROW(fm::channel_from_json(fm::Json::parse(R"({"kind": "fade"})")), fm::Error);
  EXPECT_THROW(fm::channel_from_json(fm::Json::parse(R"({"kind": "iid"})")), fm::Error);
  EXPECT_THROW(fm::channel_from_json(fm::Json::parse("3")), fm::Error);
}

TEST(Json, EmbedParamsRoundTrip) {
  fm::EmbedParams p;
  p.pn_seed = 5;
  p.alpha = 2.5;
  EXPECT_EQ(fm::embed_params_from_json(fm::to_json(p)), p);
  auto j = fm::to_json(p);
  j["alpha"] = -1.0;
  EXPECT_THROW(fm::embed_params_from_json(j), fm::Error);
  j = fm::to_json(p);
  j.erase("midband");
  EXPECT_THROW(fm::embed_params_from_json(j), fm::Error);
}

TEST(Csv, SimRowMatchesHeader) {
  fm::SimReport r;
  r.channel = "clean";
  r.attack = "swap1";
  r.attack_family = "swap";
  r.attack_level = 1;
  r.trials = 10;
  r.summary.mean_bit_accuracy = 0.983;
  r.summary.mean_log10_p = -10.5;
  r.summary.word_accuracy_ldpc = 1.0;
  r.summary.mean_localization_accuracy = 0.95;
  const std::string row = fm::to_csv_row(r);
  EXPECT_EQ(row, "clean,swap1,swap,1,0.8,10,0.983,-10.5,,1,0.95\n");
  const std::string header = fm::sim_csv_header();
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

TEST(Csv, BenchSkippedRowKeepsColumns) {
  fm::BenchRow row{"mpeg4", fm::DistortionStatus::kSkipped, "no encoder", std::nullopt};
  const auto line = fm::to_csv_row(row);
  const std::string header = fm::bench_csv_header();
  EXPECT_EQ(line.rfind("mpeg4,skipped", 0), 0u);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(line.begin(), line.end(), ','));
  EXPECT_EQ(fm::to_json(row)["status"], "skipped");
}

TEST(Manifest, RoundTripBothKeyKinds) {
  for (bool cw : {false, true}) {
    const auto m = sample_manifest(cw);
    const auto back = fm::manifest_from_json(fm::Json::parse(fm::manifest_text(m)));
    EXPECT_EQ(fm::manifest_text(back), fm::manifest_text(m));
    EXPECT_EQ(fm::manifest_digest(back), fm::manifest_digest(m));
    EXPECT_EQ(back.codeword_keys(), cw);
    EXPECT_EQ(back.templates.keys(), m.templates.keys());
    EXPECT_EQ(back.embed, m.embed);
  }
}

TEST(Manifest, DigestTracksContent) {
  auto a = sample_manifest(false);
  auto b = a;
  b.tau = 0.75;
  EXPECT_NE(fm::manifest_digest(a), fm::manifest_digest(b));
}

TEST(Manifest, RejectsInconsistentDocuments) {
  const auto good = fm::to_json(sample_manifest(true));
  auto j = good;
  j["version"] = "framemark-manifest/0";
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
  j = good;
  j["M"] = 5;
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
  j = good;
  j["data_words"][0] = "0000";
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
  j = good;
  j["embed"]["bits_per_frame"] = 32;
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
  j = good;
  j["tau"] = 1.5;
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
  j = good;
  j.erase("keys");
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
  j = fm::to_json(sample_manifest(false));
  j["data_words"] = fm::Json::array({"0001"});
  EXPECT_THROW(fm::manifest_from_json(j), fm::Error);
}

TEST(TextFiles, ContentLinesStripCommentsAndBlanks) {
  const auto lines = fm::content_lines("# header\n  abc  \n\n12 # tail\r\n");
  EXPECT_EQ(lines, (std::vector<std::string>{"abc", "12"}));
}

TEST(TextFiles, HexLinesRoundTrip) {
  const std::vector<fm::BitString> items{fm::BitString::from_uint(0xA5A5, 16), fm::BitString::from_uint(1, 16)};
  EXPECT_EQ(fm::parse_hex_lines(fm::format_hex_lines(items), 16, "payloads"), items);
  EXPECT_THROW(fm::parse_hex_lines("", 16, "payloads"), fm::Error);
  EXPECT_THROW(fm::parse_hex_lines("a5\n", 16, "payloads"), fm::Error);
  EXPECT_THROW(fm::parse_hex_lines("zzzz\n", 16, "payloads"), fm::Error);
}

TEST(TextFiles, TruthParsing) {
  EXPECT_EQ(fm::parse_truth("0\n1\n-1\n2\n"), (fm::GroundTruthSequence{0, 1, -1, 2}));
  EXPECT_THROW(fm::parse_truth("0\n1x\n"), fm::Error);
  EXPECT_THROW(fm::parse_truth("\n# nothing\n"), fm::Error);
}
