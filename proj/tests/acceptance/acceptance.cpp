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


// Acceptance checks, one per criterion. Run without arguments for all of
// them or with criterion numbers to run a subset. Prints one line per
// criterion and exits non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "framemark.hpp"
#include "support/cli_runner.hpp"
#include "support/oracles.hpp"

namespace fm = framemark;
namespace ft = framemark::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::shared_ptr<const fm::LdpcCode> code() {
  static const auto c = std::make_shared<const fm::LdpcCode>(fm::build_ldpc(7, 16, 48));
  return c;
}

std::shared_ptr<const fm::TemplateSet> templates() {
  static const auto t = std::make_shared<const fm::TemplateSet>(fm::generate_codeword_templates(*code(), 16, 7, 16));
  return t;
}

fm::SimConfig sim_config(const fm::ChannelModel& channel, std::size_t trials, bool decode_words) {
  fm::SimConfig c;
  c.templates = templates();
  c.code = code();
  c.frames = 16;
  c.trials = trials;
  c.master_seed = 20260101;
  c.channel = channel;
  c.decode_words = decode_words;
  c.threads = 0;
  return c;
}

Outcome criterion1() {
  Outcome o;
  const struct {
    std::size_t length;
    double accuracy;
    double expected;
  } rows[] = {{768, 0.950, -166.65}, {624, 0.983, -166.48}, {624, 0.933, -123.32}};
  for (const auto& r : rows) {
    const double got = fm::log_p_value(r.length, r.accuracy);
    o.require(std::abs(got - r.expected) <= 0.5,
              "log P(" + std::to_string(r.length) + ", " + num(r.accuracy, 3) + ") = " + num(got, 3) + " vs " +
                  num(r.expected, 2));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t length = 1; length <= 30; ++length) {
    for (std::size_t k = 0; k <= length; ++k) {
      const double a = static_cast<double>(k) / static_cast<double>(length);
      const double exact = ft::exact_log10_tail(length, k);
      worst = std::max(worst, std::abs(fm::log_p_value(length, a) - exact));
      ++cases;
    }
  }
  o.require(worst <= 1e-9, std::to_string(cases) + " (L, a) pairs, max |error| = " + sci(worst));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto& c = *code();
  o.require(c.k_data() * 3 == c.n_code() && c.k_data() == 16, "rate " + std::to_string(c.k_data()) + "/" +
                                                                   std::to_string(c.n_code()));
  const fm::BitString zero_syndrome(std::vector<std::uint8_t>(c.parity_count(), 0));
  std::size_t roundtrip_ok = 0;
  for (std::uint64_t w = 0; w < (1u << 16); ++w) {
    const fm::DataWord word(fm::BitString::from_uint(w, 16));
    const auto cw = c.encode(word);
    const auto r = c.decode(cw.bits());
    roundtrip_ok += static_cast<std::size_t>(r.word == word && r.converged && r.corrected_bit_count == 0 &&
                                             c.syndrome(cw.bits()) == zero_syndrome);
  }
  o.require(roundtrip_ok == 65536, "noiseless roundtrip " + std::to_string(roundtrip_ok) + "/65536");

  std::size_t worst = 48;
  auto rng = fm::substream(3, "acceptance-flips");
  std::vector<fm::DataWord> words{fm::DataWord(fm::BitString::from_uint(0xA5A5, 16)),
                                  fm::DataWord(fm::BitString::from_uint(0, 16))};
  for (int i = 0; i < 62; ++i) words.emplace_back(fm::random_bits(16, rng));
  for (const auto& word : words) {
    const auto cw = c.encode(word).bits();
    std::size_t recovered = 0;
    for (std::size_t pos = 0; pos < 48; ++pos) {
      std::vector<std::uint8_t> v(cw.bits().begin(), cw.bits().end());
      v[pos] ^= 1;
      const auto r = c.decode(fm::BitString(v));
      recovered += static_cast<std::size_t>(r.word == word && r.converged);
    }
    worst = std::min(worst, recovered);
  }
  o.require(worst >= 47, "single-flip recovery, worst of " + std::to_string(words.size()) +
                             " words: " + std::to_string(worst) + "/48");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto iid = fm::simulate_pipeline(sim_config(fm::ChannelModel::iid("iid-0.05", 0.05), 10000, true));
  const double analytic = std::pow(0.95, 16);
  o.require(std::abs(*iid.summary.word_accuracy_uncoded - analytic) <= 0.01,
            "iid 0.05 uncoded " + num(*iid.summary.word_accuracy_uncoded) + " (analytic " + num(analytic) + ")");
  o.require(*iid.summary.word_accuracy_ldpc >= 0.95, "iid LDPC " + num(*iid.summary.word_accuracy_ldpc));

  const auto ge_channel = fm::ChannelModel::gilbert_elliott("ge", 0.05, 8.0, 0.06);
  const auto ge = fm::simulate_pipeline(sim_config(ge_channel, 10000, true));
  const double u = *ge.summary.word_accuracy_uncoded;
  o.require(u >= 0.30 && u <= 0.45, "Gilbert-Elliott (marginal 0.05, burst 8, ber_bad 0.06) uncoded " + num(u));
  o.require(*ge.summary.word_accuracy_ldpc >= 0.95, "GE LDPC " + num(*ge.summary.word_accuracy_ldpc));
  o.detail += "; 10000 trials x 16 words per channel";
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto rng = fm::substream(5, "acceptance-match");
  std::size_t agree = 0;
  const std::size_t instances = 10000;
  for (std::size_t inst = 0; inst < instances; ++inst) {
    const auto m = 1 + fm::uniform_below(rng, 32);
    const auto n = 1 + fm::uniform_below(rng, 32);
    const std::size_t d = 48;
    std::vector<fm::BitString> keys;
    std::vector<std::vector<int>> plain_templates;
    for (std::uint64_t j = 0; j < m; ++j) {
      keys.push_back(fm::random_bits(d, rng));
      plain_templates.emplace_back(keys.back().bits().begin(), keys.back().bits().end());
    }
    const fm::TemplateSet set(keys, 0, 0);
    auto clip = fm::template_clip(set, n);
    const auto swaps = fm::uniform_below(rng, n / 2 + 1);
    const auto drops = fm::uniform_below(rng, n - 2 * swaps > 0 ? std::min<std::uint64_t>(n - 1, 8) + 1 : 1);
    auto spec = fm::random_tamper_spec(n, swaps, std::min<std::uint64_t>(drops, n - 1), fm::uniform_below(rng, 9), rng);
    clip = fm::apply_combined(std::move(clip), spec);
    const auto channel = fm::ChannelModel::iid("r", 0.3 * fm::uniform01(rng));
    std::vector<fm::BitString> received;
    std::vector<std::vector<int>> plain_keys;
    for (const auto& k : clip.items) {
      received.push_back(fm::flip_bits(k, channel, rng));
      plain_keys.emplace_back(received.back().bits().begin(), received.back().bits().end());
    }
    const double tau = 0.5 + 0.5 * fm::uniform01(rng);
    const auto got = fm::localize(set, fm::FrameKeyMatrix(received), clip.truth, tau);
    const auto want = ft::reference_match(plain_templates, plain_keys, clip.truth, tau);
    agree += static_cast<std::size_t>(got.predicted == want.predicted && got.accuracy == want.accuracy);
  }
  o.require(agree == instances, std::to_string(agree) + "/" + std::to_string(instances) + " instances agree exactly");
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto c = sim_config(fm::preset("clean"), 10000, false);
  const auto rows = fm::threshold_sweep(
      c, {0.8}, {fm::attack_recipe("swap", 1), fm::attack_recipe("insert", 1), fm::attack_recipe("drop", 1)});
  double mean = 0.0;
  std::string parts;
  for (const auto& r : rows) {
    mean += r.accuracy / static_cast<double>(rows.size());
    parts += " " + r.attack + "=" + num(r.accuracy, 5);
  }
  o.require(mean >= 0.90, "clean preset (BER " + num(c.channel.ber(), 3) + "), tau 0.8, mean " + num(mean, 5) +
                              " over" + parts);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const std::vector<double> taus{0.7, 0.75, 0.8, 0.85, 0.9};
  const auto rows = fm::threshold_sweep(sim_config(fm::preset("clean"), 10000, false), taus,
                                        fm::threshold_study_attacks());
  std::map<std::string, std::vector<double>> by_attack;
  for (const auto& r : rows) by_attack[r.attack].push_back(r.accuracy);
  auto series = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : "/") + num(x, 5);
    return s;
  };
  for (const char* name : {"swap", "drop"}) {
    const auto& v = by_attack.at(name);
    bool ok = true;
    for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i] <= v[i - 1];
    o.require(ok, std::string(name) + " non-increasing " + series(v));
  }
  for (const auto& [name, v] : by_attack) {
    if (name.find("insert") == std::string::npos) continue;
    const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    o.require(taus[peak] <= 0.85 && v.back() < v[peak], name + " peaks at tau " + num(taus[peak], 2) + " " + series(v));
  }
  o.detail += "; tau grid 0.7..0.9, 10000 trials per cell with shared draws across tau";
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto c = sim_config(fm::preset("clean"), 10000, false);
  std::vector<fm::AttackRecipe> swaps;
  std::vector<fm::AttackRecipe> drops;
  std::vector<fm::AttackRecipe> inserts;
  for (std::size_t k = 1; k <= 8; ++k) swaps.push_back(fm::attack_recipe("swap", k));
  for (std::size_t k = 1; k <= 10; ++k) drops.push_back(fm::attack_recipe("drop", k));
  for (std::size_t k = 1; k <= 10; ++k) inserts.push_back(fm::attack_recipe("insert", k));
  auto spread = [](const std::vector<fm::SweepRow>& rows) {
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& r : rows) {
      lo = std::min(lo, r.accuracy);
      hi = std::max(hi, r.accuracy);
    }
    return hi - lo;
  };
  const auto swap_rows = fm::threshold_sweep(c, {0.8}, swaps);
  const auto drop_rows = fm::threshold_sweep(c, {0.8}, drops);
  o.require(spread(swap_rows) < 0.05, "swap 1..8 spread " + num(spread(swap_rows), 5));
  o.require(spread(drop_rows) < 0.05, "drop 1..10 spread " + num(spread(drop_rows), 5));

  const auto insert_rows = fm::threshold_sweep(c, {0.8}, inserts);
  bool ok = true;
  std::string s;
  for (std::size_t i = 0; i < insert_rows.size(); ++i) {
    if (i > 0) ok = ok && insert_rows[i].accuracy >= insert_rows[i - 1].accuracy;
    s += (s.empty() ? "" : "/") + num(insert_rows[i].accuracy, 5);
  }
  const auto rates = ft::match_rates(48, 16, 0.8, c.channel.ber());
  o.require(ok, "insert 1..10 non-decreasing " + s);
  o.detail += "; clean preset: genuine-key miss rate " + sci(1.0 - rates.genuine) +
              " < random-key false-match rate " + sci(1.0 - rates.rejected) +
              ", so each added random frame lowers expected accuracy (" +
              num(ft::expected_insert_accuracy(16, 1, rates), 6) + " -> " +
              num(ft::expected_insert_accuracy(16, 10, rates), 6) + ")";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto corpus = fm::read_frame_dir(FRAMEMARK_CORPUS_DIR);
  fm::EmbedParams params;
  params.pn_seed = fm::derive_seed(7, "pn");
  std::size_t exact = 0;
  double min_psnr = INFINITY;
  std::size_t jpeg_correct = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto rng = fm::substream(9, "acceptance-payload", {i});
    const auto bits = fm::random_bits(48, rng);
    const auto marked = fm::embed_frame(corpus[i], bits, params);
    exact += static_cast<std::size_t>(fm::extract_frame(marked, params) == bits);
    min_psnr = std::min(min_psnr, fm::psnr(corpus[i], marked));
    jpeg_correct += 48 - fm::hamming_distance(bits, fm::extract_frame(fm::jpeg_roundtrip(marked, 50), params));
  }
  o.require(exact == corpus.size() && corpus.front().height() == 512,
            "clean roundtrip exact on " + std::to_string(exact) + "/" + std::to_string(corpus.size()) +
                " 512x512 frames (alpha " + num(params.alpha, 1) + ")");
  o.require(min_psnr >= 40.0, "min PSNR " + num(min_psnr, 2) + " dB");

  // Unwatermarked carriers: random 128x128 crops of the corpus against
  // random payloads.
  auto rng = fm::substream(9, "acceptance-unmarked");
  std::size_t correct = 0;
  const std::size_t trials = 1000;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& src = corpus[fm::uniform_below(rng, corpus.size())];
    const auto oy = fm::uniform_below(rng, src.height() - 128 + 1);
    const auto ox = fm::uniform_below(rng, src.width() - 128 + 1);
    std::vector<std::uint8_t> s;
    s.reserve(128 * 128 * 3);
    for (std::size_t y = 0; y < 128; ++y) {
      for (std::size_t x = 0; x < 128; ++x) {
        for (std::size_t ch = 0; ch < 3; ++ch) s.push_back(src.at(oy + y, ox + x, ch));
      }
    }
    const auto bits = fm::random_bits(48, rng);
    correct += 48 - fm::hamming_distance(bits, fm::extract_frame(fm::Frame(128, 128, std::move(s)), params));
  }
  const double chance = static_cast<double>(correct) / static_cast<double>(trials * 48);
  o.require(chance >= 0.48 && chance <= 0.52, "unwatermarked accuracy " + num(chance) + " over 1000 frames");
  const double jpeg = static_cast<double>(jpeg_correct) / static_cast<double>(corpus.size() * 48);
  o.require(jpeg >= 0.70, "JPEG q50 mean accuracy " + num(jpeg));
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto work = std::filesystem::temp_directory_path() / "framemark-acceptance-determinism";
  std::filesystem::remove_all(work);
  ft::run_pipeline(FRAMEMARK_CLI_PATH, work / "first", FRAMEMARK_CORPUS_DIR);
  ft::run_pipeline(FRAMEMARK_CLI_PATH, work / "second", FRAMEMARK_CORPUS_DIR);
  const auto a = ft::snapshot(work / "first");
  const auto b = ft::snapshot(work / "second");
  std::size_t json_csv = 0;
  std::size_t identical = 0;
  for (const auto& [name, bytes] : a) {
    const auto ext = std::filesystem::path(name).extension();
    if (ext == ".json" || ext == ".csv") ++json_csv;
    identical += static_cast<std::size_t>(b.contains(name) && b.at(name) == bytes);
  }
  o.require(a.size() == b.size() && identical == a.size(),
            std::to_string(identical) + "/" + std::to_string(a.size()) + " output files byte-identical (" +
                std::to_string(json_csv) + " JSON/CSV) across keygen, embed, extract, verify, localize, simulate, bench");
  std::filesystem::remove_all(work);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const long n = std::strtol(argv[i], nullptr, 10);
    if (n < 1 || n > static_cast<long>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], criteria.size());
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n));
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= criteria.size(); ++i) selected.push_back(i);
  }

  int failures = 0;
  for (auto n : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    std::printf("criterion %zu %s (%.1f s): %s\n", n, o.pass ? "PASS" : "FAIL", dt.count(),
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
