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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/detection.hpp"
#include "framemark/error.hpp"
#include "framemark/ldpc.hpp"
#include "framemark/localization.hpp"
#include "framemark/parallel.hpp"
#include "framemark/rng.hpp"
#include "framemark/templates.hpp"

namespace framemark {

enum class ChannelKind { kIid, kBurst };

struct BurstParams {
  double p_good_to_bad = 0.0;
  double p_bad_to_good = 1.0;
  double ber_bad = 0.0;
};

/// Extraction modelled as a binary channel. The burst kind is a two-state
/// Gilbert-Elliott chain with an error-free good state; `ber` is then its
/// stationary (marginal) flip rate.
class ChannelModel {
 public:
  static ChannelModel iid(std::string name, double ber) {
    if (!(ber >= 0.0 && ber <= 0.5)) throw Error("ChannelModel: ber must lie in [0, 0.5]");
    return ChannelModel(std::move(name), ChannelKind::kIid, ber, {});
  }

  static ChannelModel burst(std::string name, BurstParams params) {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(params.p_good_to_bad) || !in_unit(params.p_bad_to_good) || !in_unit(params.ber_bad)) {
      throw Error("ChannelModel: burst probabilities must lie in [0, 1]");
    }
    if (params.p_good_to_bad + params.p_bad_to_good <= 0.0) {
      throw Error("ChannelModel: burst chain needs a non-zero transition probability");
    }
    const double marginal = stationary_bad(params) * params.ber_bad;
    if (marginal > 0.5) throw Error("ChannelModel: marginal ber exceeds 0.5");
    return ChannelModel(std::move(name), ChannelKind::kBurst, marginal, params);
  }

  /// Burst channel with the given marginal flip rate and mean bad-state
  /// sojourn (in bits), with flip probability ber_bad inside the bad state.
  static ChannelModel gilbert_elliott(std::string name, double marginal_ber, double mean_burst_length,
                                      double ber_bad) {
    if (mean_burst_length < 1.0) throw Error("gilbert_elliott: mean burst length must be >= 1");
    if (!(ber_bad > 0.0 && marginal_ber >= 0.0 && marginal_ber <= ber_bad)) {
      throw Error("gilbert_elliott: need 0 <= marginal_ber <= ber_bad, ber_bad > 0");
    }
    const double p_bg = 1.0 / mean_burst_length;
    const double pi_bad = marginal_ber / ber_bad;
    const double p_gb = pi_bad >= 1.0 ? 1.0 : p_bg * pi_bad / (1.0 - pi_bad);
    if (p_gb > 1.0) {
      throw Error("gilbert_elliott: marginal ber unreachable with this burst length and ber_bad");
    }
    return burst(std::move(name), {p_gb, p_bg, ber_bad});
  }

  const std::string& name() const noexcept { return name_; }
  ChannelKind kind() const noexcept { return kind_; }
  double ber() const noexcept { return ber_; }
  const BurstParams& burst_params() const noexcept { return burst_; }

  static double stationary_bad(const BurstParams& p) {
    return p.p_good_to_bad / (p.p_good_to_bad + p.p_bad_to_good);
  }

 private:
  ChannelModel(std::string name, ChannelKind kind, double ber, BurstParams burst)
      : name_(std::move(name)), kind_(kind), ber_(ber), burst_(burst) {}

  std::string name_;
  ChannelKind kind_;
  double ber_;
  BurstParams burst_;
};

/// Passes bits through the channel. Burst chains start in their stationary
/// distribution at the first bit of every call.
template <class Rng>
BitString flip_bits(const BitString& input, const ChannelModel& channel, Rng& rng) {
  std::vector<std::uint8_t> out(input.bits().begin(), input.bits().end());
  if (channel.kind() == ChannelKind::kIid) {
    if (channel.ber() > 0.0) {
      for (auto& b : out) b ^= static_cast<std::uint8_t>(bernoulli(rng, channel.ber()));
    }
    return BitString(std::move(out));
  }
  const auto& p = channel.burst_params();
  bool bad = bernoulli(rng, ChannelModel::stationary_bad(p));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0) bad = bad ? !bernoulli(rng, p.p_bad_to_good) : bernoulli(rng, p.p_good_to_bad);
    if (bad) out[i] ^= static_cast<std::uint8_t>(bernoulli(rng, p.ber_bad));
  }
  return BitString(std::move(out));
}

struct PresetEntry {
  std::string_view name;
  double bit_accuracy;
};

/// Measured bit accuracy per distortion of the deployed (second-stage)
/// watermarking model.
inline constexpr std::array<PresetEntry, 12> kChannelPresets{{
    {"clean", 0.983},
    {"resize", 0.679},
    {"jpeg", 0.723},
    {"crop", 0.970},
    {"rotation25", 0.630},
    {"rotation90", 0.483},
    {"brightness", 0.965},
    {"contrast", 0.757},
    {"saturation", 0.967},
    {"sharpness", 0.972},
    {"gaussian_noise", 0.882},
    {"mpeg4", 0.723},
}};

/// i.i.d. channel with ber = 1 - accuracy, clamped to 0.5 (accuracies below
/// chance are treated as chance).
inline ChannelModel preset(std::string_view name) {
  for (const auto& e : kChannelPresets) {
    if (e.name == name) {
      // Rounded so "clean" reports 0.017 rather than 1 - 0.983 in binary.
      const double ber = std::round((1.0 - e.bit_accuracy) * 1e9) / 1e9;
      return ChannelModel::iid(std::string(name), std::min(0.5, ber));
    }
  }
  std::string valid;
  for (const auto& e : kChannelPresets) {
    if (!valid.empty()) valid += ", ";
    valid += e.name;
  }
  throw Error("unknown channel preset '" + std::string(name) + "' (valid: " + valid + ")");
}

// ---------------------------------------------------------------------------
// Monte-Carlo pipeline

/// Attack drawn afresh for every trial: counts only, positions random.
struct AttackRecipe {
  std::string name = "none";
  std::size_t swaps = 0;
  std::size_t drops = 0;
  std::size_t inserts = 0;
  std::string family = "none";
  std::size_t level = 0;
};

/// N manipulations dealt round-robin over swap, drop, insert.
inline AttackRecipe combined_recipe(std::size_t manipulations) {
  AttackRecipe r{"combined" + std::to_string(manipulations), 0, 0, 0, "combined", manipulations};
  for (std::size_t i = 0; i < manipulations; ++i) {
    if (i % 3 == 0) ++r.swaps;
    else if (i % 3 == 1) ++r.drops;
    else ++r.inserts;
  }
  return r;
}

/// `family` is "none", "combined", or '+'-joined operators from {swap,
/// drop, insert}; each listed operator is applied `level` times.
inline AttackRecipe attack_recipe(const std::string& family, std::size_t level) {
  if (family == "none") return {};
  if (family == "combined") return combined_recipe(level);
  if (level == 0) throw Error("attack '" + family + "': level must be >= 1");
  AttackRecipe r{family + std::to_string(level), 0, 0, 0, family, level};
  std::size_t start = 0;
  while (start <= family.size()) {
    const auto end = std::min(family.find('+', start), family.size());
    const auto op = family.substr(start, end - start);
    std::size_t* slot = op == "swap" ? &r.swaps : op == "drop" ? &r.drops : op == "insert" ? &r.inserts : nullptr;
    if (slot == nullptr) throw Error("unknown attack operator '" + op + "' (valid: swap, drop, insert, combined, none)");
    if (*slot != 0) throw Error("attack '" + family + "' lists '" + op + "' twice");
    *slot = level;
    start = end + 1;
  }
  return r;
}

/// The single-instance attacks and their pairwise and triple combinations.
inline std::vector<AttackRecipe> threshold_study_attacks() {
  std::vector<AttackRecipe> out;
  for (const char* f : {"swap", "insert", "drop", "swap+insert", "swap+drop", "insert+drop", "swap+insert+drop"}) {
    auto r = attack_recipe(f, 1);
    r.name = f;
    out.push_back(std::move(r));
  }
  return out;
}

struct SimConfig {
  std::size_t frames = 16;
  std::shared_ptr<const TemplateSet> templates;
  std::shared_ptr<const LdpcCode> code;  // needed for word accuracies
  ChannelModel channel = ChannelModel::iid("noiseless", 0.0);
  AttackRecipe attack;
  std::optional<TamperSpec> fixed_tamper;  // overrides `attack` when set
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  double tau = kDefaultTau;
  bool decode_words = true;
  std::size_t threads = 1;
};

struct TrialResult {
  TamperSpec tamper;
  GroundTruthSequence truth;
  DetectionReport detection;  // genuine frames only, pooled
  LocalizationResult localization;
  std::optional<double> word_accuracy_uncoded;
  std::optional<double> word_accuracy_ldpc;
  std::size_t words = 0;
};

struct SimSummary {
  double mean_bit_accuracy = 0.0;
  double mean_log10_p = 0.0;
  double mean_localization_accuracy = 0.0;
  std::optional<double> word_accuracy_uncoded;  // pooled over all words
  std::optional<double> word_accuracy_ldpc;
  DetectionReport pooled;
};

struct SimReport {
  std::string channel;
  std::string attack;
  std::string attack_family;
  std::size_t attack_level = 0;
  double tau = kDefaultTau;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> per_trial;
  SimSummary summary;
};

// Substream tag for inserted frames; genuine frames use their frame index.
inline constexpr std::uint64_t kInsertedSourceTag = std::uint64_t{1} << 40;

/// Stream for the channel noise applied to the key of `source` in `trial`.
/// Keyed by frame identity rather than position, so the same frame sees the
/// same noise whatever tampering moved it around.
inline SplitMix64 channel_stream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t source) {
  return substream(master_seed, "channel", {trial, source});
}

namespace detail {

struct FrameSource {
  bool inserted = false;
  std::size_t index = 0;  // frame index, or insertion ordinal
};

struct TrialData {
  TamperSpec tamper;
  Tampered<FrameSource> clip;
  std::vector<BitString> received;
};

inline void validate(const SimConfig& config) {
  if (!config.templates) throw Error("SimConfig: template set is required");
  if (config.frames == 0) throw Error("SimConfig: frames must be >= 1");
  if (config.trials == 0) throw Error("SimConfig: trials must be >= 1");
  if (config.decode_words && config.templates->has_data_words() && !config.code) {
    throw Error("SimConfig: codeword templates need the LDPC code to score words");
  }
  if (config.code && config.templates->has_data_words() &&
      config.code->n_code() != config.templates->key_length()) {
    throw Error("SimConfig: template length differs from n_code");
  }
}

inline TrialData run_trial(const SimConfig& config, const AttackRecipe& attack, std::size_t trial) {
  const auto& templates = *config.templates;
  const std::size_t d = templates.key_length();
  const auto t = static_cast<std::uint64_t>(trial);

  TrialData data;
  if (config.fixed_tamper) {
    data.tamper = *config.fixed_tamper;
  } else {
    auto rng = substream(config.master_seed, "tamper", {t});
    data.tamper = random_tamper_spec(config.frames, attack.swaps, attack.drops, attack.inserts, rng);
  }

  Tampered<FrameSource> clip;
  for (std::size_t i = 0; i < config.frames; ++i) {
    clip.items.push_back({false, i});
    clip.truth.push_back(static_cast<long>(i % templates.size()));
  }
  data.clip = apply_combined(std::move(clip), data.tamper, [](std::size_t j) { return FrameSource{true, j}; });

  data.received.reserve(data.clip.items.size());
  for (const auto& src : data.clip.items) {
    if (src.inserted) {
      auto key_rng = substream(config.master_seed, "insert-key", {t, src.index});
      auto noise = channel_stream(config.master_seed, t, kInsertedSourceTag + src.index);
      data.received.push_back(flip_bits(random_bits(d, key_rng), config.channel, noise));
    } else {
      auto noise = channel_stream(config.master_seed, t, src.index);
      data.received.push_back(flip_bits(templates[src.index % templates.size()], config.channel, noise));
    }
  }
  return data;
}

inline TrialResult score_trial(const SimConfig& config, TrialData data) {
  const auto& templates = *config.templates;
  TrialResult r;
  r.tamper = std::move(data.tamper);
  r.truth = data.clip.truth;

  std::vector<DetectionReport> frames;
  std::size_t uncoded_ok = 0;
  std::size_t coded_ok = 0;
  std::size_t words = 0;
  const bool score_words = config.decode_words && templates.has_data_words();
  for (std::size_t i = 0; i < data.clip.items.size(); ++i) {
    const auto& src = data.clip.items[i];
    if (src.inserted) continue;
    const std::size_t tmpl = src.index % templates.size();
    frames.push_back(detect(templates[tmpl], data.received[i]));
    if (score_words) {
      const auto& word = templates.data_words()[tmpl];
      uncoded_ok += static_cast<std::size_t>(data.received[i].slice(0, word.size()) == word);
      coded_ok += static_cast<std::size_t>(config.code->decode(data.received[i]).word.bits() == word);
      ++words;
    }
  }
  r.detection = aggregate(frames);
  if (score_words) {
    r.words = words;
    r.word_accuracy_uncoded = static_cast<double>(uncoded_ok) / static_cast<double>(words);
    r.word_accuracy_ldpc = static_cast<double>(coded_ok) / static_cast<double>(words);
  }
  r.localization = localize(templates, FrameKeyMatrix(std::move(data.received)), r.truth, config.tau);
  return r;
}

}  // namespace detail

/// Per trial: frames carry template keys (frame i -> template i mod M), the
/// attack is applied, every key crosses the channel, then localization,
/// LDPC decoding, and detection statistics run on the result. Output depends
/// only on the config, never on the thread count.
inline SimReport simulate_pipeline(const SimConfig& config) {
  detail::validate(config);
  SimReport report;
  report.channel = config.channel.name();
  report.attack = config.fixed_tamper ? std::string("fixed") : config.attack.name;
  report.attack_family = config.fixed_tamper ? std::string("fixed") : config.attack.family;
  report.attack_level = config.fixed_tamper ? 0 : config.attack.level;
  report.tau = config.tau;
  report.trials = config.trials;
  report.master_seed = config.master_seed;
  report.per_trial.resize(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    report.per_trial[t] = detail::score_trial(config, detail::run_trial(config, config.attack, t));
  });

  auto& s = report.summary;
  std::vector<DetectionReport> pooled;
  std::size_t words = 0;
  double uncoded = 0.0;
  double coded = 0.0;
  for (const auto& tr : report.per_trial) {
    s.mean_bit_accuracy += tr.detection.bit_accuracy;
    s.mean_log10_p += tr.detection.log10_p;
    s.mean_localization_accuracy += tr.localization.accuracy;
    pooled.push_back(tr.detection);
    if (tr.word_accuracy_uncoded) {
      uncoded += *tr.word_accuracy_uncoded * static_cast<double>(tr.words);
      coded += *tr.word_accuracy_ldpc * static_cast<double>(tr.words);
      words += tr.words;
    }
  }
  const auto n = static_cast<double>(config.trials);
  s.mean_bit_accuracy /= n;
  s.mean_log10_p /= n;
  s.mean_localization_accuracy /= n;
  s.pooled = aggregate(pooled);
  if (words > 0) {
    s.word_accuracy_uncoded = uncoded / static_cast<double>(words);
    s.word_accuracy_ldpc = coded / static_cast<double>(words);
  }
  return report;
}

struct SweepRow {
  std::string attack;
  double tau = 0.0;
  std::size_t trials = 0;
  double accuracy = 0.0;  // mean localization accuracy
};

/// Localization accuracy on a (attack x tau) grid. Each trial's keys are drawn
/// once and scored at every tau, so differences between rows of one attack
/// come from tau alone.
inline std::vector<SweepRow> threshold_sweep(const SimConfig& config, const std::vector<double>& taus,
                                             const std::vector<AttackRecipe>& attacks) {
  detail::validate(config);
  if (taus.empty()) throw Error("threshold_sweep: no tau values");
  for (auto tau : taus) {
    if (!(tau > 0.0 && tau < 1.0)) throw Error("threshold_sweep: tau values must lie in (0, 1)");
  }
  std::vector<SweepRow> rows;
  for (const auto& attack : attacks) {
    std::vector<std::vector<double>> acc(config.trials, std::vector<double>(taus.size()));
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
      auto data = detail::run_trial(config, attack, t);
      const FrameKeyMatrix keys(std::move(data.received));
      for (std::size_t k = 0; k < taus.size(); ++k) {
        acc[t][k] = sequence_accuracy(match_frames(*config.templates, keys, taus[k]).predicted, data.clip.truth);
      }
    });
    for (std::size_t k = 0; k < taus.size(); ++k) {
      double sum = 0.0;
      for (const auto& row : acc) sum += row[k];
      rows.push_back({attack.name, taus[k], config.trials, sum / static_cast<double>(config.trials)});
    }
  }
  return rows;
}

}  // namespace framemark
