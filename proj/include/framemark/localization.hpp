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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"
#include "framemark/keys.hpp"
#include "framemark/rng.hpp"
#include "framemark/templates.hpp"

namespace framemark {

/// Sentinel for a frame that matches no template.
inline constexpr long kInserted = -1;

/// Expected template index per frame of the (possibly tampered) clip, or
/// kInserted for frames that were added.
using GroundTruthSequence = std::vector<long>;

inline constexpr double kDefaultTau = 0.8;

struct FrameMatching {
  std::vector<long> predicted;
  std::vector<double> similarity;  // best-match similarity per frame
};

/// Assigns each key to its most similar template (lowest index on ties) or
/// kInserted when that similarity is below tau.
inline FrameMatching match_frames(const TemplateSet& templates, const FrameKeyMatrix& keys, double tau) {
  if (keys.key_length() != templates.key_length()) {
    throw Error("localize: keys have " + std::to_string(keys.key_length()) + " bits, templates have " +
                std::to_string(templates.key_length()));
  }
  FrameMatching out;
  out.predicted.reserve(keys.size());
  out.similarity.reserve(keys.size());
  for (const auto& key : keys.keys()) {
    const auto best = best_match(key, templates.keys());
    out.predicted.push_back(best.similarity < tau ? kInserted : static_cast<long>(best.index));
    out.similarity.push_back(best.similarity);
  }
  return out;
}

inline double sequence_accuracy(const std::vector<long>& predicted, const GroundTruthSequence& truth) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    throw Error("sequence_accuracy: predicted has " + std::to_string(predicted.size()) + " entries, truth has " +
                std::to_string(truth.size()));
  }
  std::size_t ok = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) ok += static_cast<std::size_t>(predicted[i] == truth[i]);
  return static_cast<double>(ok) / static_cast<double>(predicted.size());
}

struct LocalizationResult {
  std::vector<long> predicted;
  std::vector<double> per_frame_similarity;
  double accuracy = 0.0;
};

inline LocalizationResult localize(const TemplateSet& templates, const FrameKeyMatrix& keys,
                                   const GroundTruthSequence& truth, double tau = kDefaultTau) {
  if (truth.size() != keys.size()) {
    throw Error("localize: truth has " + std::to_string(truth.size()) + " entries for " +
                std::to_string(keys.size()) + " keys");
  }
  const auto m = static_cast<long>(templates.size());
  for (auto t : truth) {
    if (t != kInserted && (t < 0 || t >= m)) throw Error("localize: truth entry outside {-1} u [0, M)");
  }
  auto matching = match_frames(templates, keys, tau);
  const double acc = sequence_accuracy(matching.predicted, truth);
  return {std::move(matching.predicted), std::move(matching.similarity), acc};
}

// ---------------------------------------------------------------------------
// Temporal attacks

struct TamperSpec {
  std::vector<std::pair<std::size_t, std::size_t>> swap_pairs;
  std::vector<std::size_t> drop_indices;
  std::size_t insert_count = 0;
  // Position of each insertion in the sequence as it stands when that
  // insertion happens. Drawn from the seed when empty.
  std::vector<std::size_t> insert_positions;
  std::uint64_t rng_seed = 0;

  bool empty() const noexcept { return swap_pairs.empty() && drop_indices.empty() && insert_count == 0; }
};

/// Items (keys, or anything carried alongside them) plus the ground truth of
/// the clip they form.
template <class Item>
struct Tampered {
  std::vector<Item> items;
  GroundTruthSequence truth;
};

template <class Item>
Tampered<Item> apply_swap(Tampered<Item> seq, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t n = seq.items.size();
  if (seq.truth.size() != n) throw Error("apply_swap: items and truth differ in length");
  std::vector<std::uint8_t> used(n, 0);
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) throw Error("apply_swap: index out of range");
    if (a == b || used[a] || used[b]) throw Error("apply_swap: swap pairs must be disjoint");
    used[a] = used[b] = 1;
  }
  for (const auto& [a, b] : pairs) {
    std::swap(seq.items[a], seq.items[b]);
    std::swap(seq.truth[a], seq.truth[b]);
  }
  return seq;
}

template <class Item>
Tampered<Item> apply_drop(Tampered<Item> seq, const std::vector<std::size_t>& indices) {
  const std::size_t n = seq.items.size();
  if (seq.truth.size() != n) throw Error("apply_drop: items and truth differ in length");
  std::vector<std::uint8_t> drop(n, 0);
  for (auto i : indices) {
    if (i >= n) throw Error("apply_drop: index out of range");
    if (drop[i]) throw Error("apply_drop: duplicate index");
    drop[i] = 1;
  }
  if (indices.size() >= n) throw Error("apply_drop: at least one frame must survive");
  Tampered<Item> out;
  out.items.reserve(n - indices.size());
  out.truth.reserve(n - indices.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) {
      out.items.push_back(std::move(seq.items[i]));
      out.truth.push_back(seq.truth[i]);
    }
  }
  return out;
}

/// Inserts `count` items made by make_item(j) (j = 0..count-1). Positions are
/// taken from `positions` when given, otherwise drawn uniformly from rng and
/// appended to it. Inserted entries get truth kInserted.
template <class Item, class Rng, class MakeItem>
Tampered<Item> apply_insert(Tampered<Item> seq, std::size_t count, Rng& rng, MakeItem&& make_item,
                            std::vector<std::size_t>* positions = nullptr) {
  if (seq.truth.size() != seq.items.size()) throw Error("apply_insert: items and truth differ in length");
  const bool given = positions != nullptr && !positions->empty();
  if (given && positions->size() != count) throw Error("apply_insert: position count differs from insert count");
  for (std::size_t j = 0; j < count; ++j) {
    std::size_t pos;
    if (given) {
      pos = (*positions)[j];
      if (pos > seq.items.size()) throw Error("apply_insert: position out of range");
    } else {
      pos = static_cast<std::size_t>(uniform_below(rng, seq.items.size() + 1));
      if (positions) positions->push_back(pos);
    }
    const auto at = static_cast<std::ptrdiff_t>(pos);
    seq.items.insert(seq.items.begin() + at, make_item(j));
    seq.truth.insert(seq.truth.begin() + at, kInserted);
  }
  return seq;
}

/// Swap, then drop, then insert; insertion positions and (for keys) inserted
/// content come from spec.rng_seed. The spec's insert_positions are filled in
/// when they were drawn.
template <class Item, class MakeItem>
Tampered<Item> apply_combined(Tampered<Item> seq, TamperSpec& spec, MakeItem&& make_item) {
  seq = apply_swap(std::move(seq), spec.swap_pairs);
  seq = apply_drop(std::move(seq), spec.drop_indices);
  auto rng = substream(spec.rng_seed, "insert-positions");
  return apply_insert(std::move(seq), spec.insert_count, rng, make_item, &spec.insert_positions);
}

using TamperedKeys = Tampered<BitString>;

/// Keys of an untampered clip: frame i carries template i mod M.
inline TamperedKeys template_clip(const TemplateSet& templates, std::size_t frames) {
  TamperedKeys out;
  for (std::size_t i = 0; i < frames; ++i) {
    out.items.push_back(templates[i % templates.size()]);
    out.truth.push_back(static_cast<long>(i % templates.size()));
  }
  return out;
}

/// Inserted frames carry uniformly random keys drawn from the spec seed.
inline TamperedKeys apply_combined(TamperedKeys seq, TamperSpec& spec) {
  if (spec.insert_count > 0 && seq.items.empty()) throw Error("apply_combined: cannot infer key length");
  const std::size_t d = seq.items.empty() ? 0 : seq.items.front().size();
  const auto seed = spec.rng_seed;
  return apply_combined(std::move(seq), spec, [d, seed](std::size_t j) {
    auto rng = substream(seed, "insert-key", {j});
    return random_bits(d, rng);
  });
}

template <class Rng>
TamperedKeys apply_insert(TamperedKeys seq, std::size_t count, Rng& rng) {
  if (seq.items.empty()) throw Error("apply_insert: cannot infer key length");
  const std::size_t d = seq.items.front().size();
  std::vector<BitString> noise;
  for (std::size_t j = 0; j < count; ++j) noise.push_back(random_bits(d, rng));
  return apply_insert(std::move(seq), count, rng, [&noise](std::size_t j) { return noise[j]; });
}

/// Draws a spec for a clip of `frames` frames: `swaps` disjoint pairs, then
/// `drops` distinct indices of the swapped clip, then `inserts` insertions.
template <class Rng>
TamperSpec random_tamper_spec(std::size_t frames, std::size_t swaps, std::size_t drops, std::size_t inserts,
                              Rng& rng) {
  if (2 * swaps > frames) throw Error("random_tamper_spec: too many swap pairs for the clip length");
  if (drops >= frames) throw Error("random_tamper_spec: drops would remove every frame");
  TamperSpec spec;
  std::vector<std::size_t> order(frames);
  for (std::size_t i = 0; i < frames; ++i) order[i] = i;
  shuffle(order, rng);
  for (std::size_t p = 0; p < swaps; ++p) spec.swap_pairs.emplace_back(order[2 * p], order[2 * p + 1]);
  shuffle(order, rng);
  spec.drop_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(drops));
  std::sort(spec.drop_indices.begin(), spec.drop_indices.end());
  spec.insert_count = inserts;
  spec.rng_seed = rng();
  return spec;
}

// ---------------------------------------------------------------------------
// Event diagnosis

enum class EventKind { kSwap, kInsert, kDrop };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::kSwap: return "swap";
    case EventKind::kInsert: return "insert";
    case EventKind::kDrop: return "drop";
  }
  return "?";
}

struct TamperEvent {
  EventKind kind;
  // swap: the two predicted-sequence positions; insert: the position;
  // drop: the position in the expected order.
  std::vector<std::size_t> positions;
  // swap: the two template indices; drop: the missing index; insert: empty.
  std::vector<long> template_indices;
  friend bool operator==(const TamperEvent&, const TamperEvent&) = default;
};

/// Explains a predicted sequence against the expected template order:
/// kInserted entries (and repeats of an index already seen) are insertions,
/// expected indices that never appear are drops, and the permutation of the
/// remaining frames is decomposed into transpositions, one swap event each.
inline std::vector<TamperEvent> diagnose(const std::vector<long>& predicted, const std::vector<long>& expected) {
  std::vector<TamperEvent> events;
  std::vector<long> rank_of;  // template index -> rank in expected order
  for (std::size_t r = 0; r < expected.size(); ++r) {
    const auto t = expected[r];
    if (t < 0) continue;
    if (static_cast<std::size_t>(t) >= rank_of.size()) rank_of.resize(static_cast<std::size_t>(t) + 1, -1);
    if (rank_of[static_cast<std::size_t>(t)] < 0) rank_of[static_cast<std::size_t>(t)] = static_cast<long>(r);
  }
  auto rank = [&](long t) -> long {
    return (t >= 0 && static_cast<std::size_t>(t) < rank_of.size()) ? rank_of[static_cast<std::size_t>(t)] : -1;
  };

  std::vector<std::size_t> kept_pos;
  std::vector<long> kept_rank;
  std::set<long> seen;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const long r = rank(predicted[i]);
    if (predicted[i] == kInserted || r < 0 || !seen.insert(predicted[i]).second) {
      events.push_back({EventKind::kInsert, {i}, {}});
      continue;
    }
    kept_pos.push_back(i);
    kept_rank.push_back(r);
  }

  for (std::size_t r = 0; r < expected.size(); ++r) {
    if (expected[r] >= 0 && rank_of[static_cast<std::size_t>(expected[r])] == static_cast<long>(r) &&
        !seen.contains(expected[r])) {
      events.push_back({EventKind::kDrop, {r}, {expected[r]}});
    }
  }

  // target[j]: where kept frame j belongs among the kept frames.
  std::vector<long> sorted_rank(kept_rank);
  std::sort(sorted_rank.begin(), sorted_rank.end());
  std::vector<std::size_t> target(kept_rank.size());
  for (std::size_t j = 0; j < kept_rank.size(); ++j) {
    target[j] = static_cast<std::size_t>(
        std::lower_bound(sorted_rank.begin(), sorted_rank.end(), kept_rank[j]) - sorted_rank.begin());
  }
  std::vector<std::uint8_t> visited(target.size(), 0);
  for (std::size_t start = 0; start < target.size(); ++start) {
    if (visited[start] || target[start] == start) continue;
    // Walk the cycle; a cycle of length c costs c - 1 transpositions.
    std::vector<std::size_t> cycle;
    for (std::size_t j = start; !visited[j]; j = target[j]) {
      visited[j] = 1;
      cycle.push_back(j);
    }
    for (std::size_t c = 1; c < cycle.size(); ++c) {
      const auto a = cycle[0];
      const auto b = cycle[c];
      events.push_back({EventKind::kSwap,
                        {kept_pos[std::min(a, b)], kept_pos[std::max(a, b)]},
                        {predicted[kept_pos[std::min(a, b)]], predicted[kept_pos[std::max(a, b)]]}});
    }
  }
  return events;
}

}  // namespace framemark
