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

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"
#include "framemark/keys.hpp"
#include "framemark/ldpc.hpp"
#include "framemark/rng.hpp"

namespace framemark {

/// M reference keys of a common length d with a guaranteed minimum pairwise
/// Hamming distance. When the keys are LDPC codewords, data_words holds the
/// matching information words (same order); otherwise it is empty.
class TemplateSet {
 public:
  TemplateSet(std::vector<BitString> keys, std::uint64_t seed, std::size_t min_pairwise_distance,
              std::vector<BitString> data_words = {})
      : keys_(std::move(keys)), seed_(seed), min_distance_(min_pairwise_distance), words_(std::move(data_words)) {
    if (keys_.empty()) throw Error("TemplateSet: at least one key is required");
    for (const auto& k : keys_) {
      if (k.size() != keys_.front().size()) throw Error("TemplateSet: keys must share one length");
    }
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      for (std::size_t j = i + 1; j < keys_.size(); ++j) {
        if (hamming_distance(keys_[i], keys_[j]) < min_distance_) {
          throw Error("TemplateSet: keys " + std::to_string(i) + " and " + std::to_string(j) +
                      " are closer than min_distance " + std::to_string(min_distance_));
        }
      }
    }
    if (!words_.empty() && words_.size() != keys_.size()) {
      throw Error("TemplateSet: data word count must match key count");
    }
  }

  std::size_t size() const noexcept { return keys_.size(); }
  std::size_t key_length() const noexcept { return keys_.front().size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t min_distance() const noexcept { return min_distance_; }
  const std::vector<BitString>& keys() const noexcept { return keys_; }
  const BitString& operator[](std::size_t i) const noexcept { return keys_[i]; }
  bool has_data_words() const noexcept { return !words_.empty(); }
  const std::vector<BitString>& data_words() const noexcept { return words_; }

  friend bool operator==(const TemplateSet&, const TemplateSet&) = default;

 private:
  std::vector<BitString> keys_;
  std::uint64_t seed_;
  std::size_t min_distance_;
  std::vector<BitString> words_;
};

namespace detail {

// Sphere-packing bound: M disjoint radius-t balls, t = floor((dmin - 1) / 2),
// must fit in {0,1}^d. Necessary, not sufficient.
inline bool packing_bound_allows(std::size_t count, std::size_t d, std::size_t min_distance) {
  if (min_distance <= 1) return true;
  const std::size_t t = (min_distance - 1) / 2;
  double log2_ball = -INFINITY;
  for (std::size_t i = 0; i <= t; ++i) {
    const double log2_binom =
        (std::lgamma(static_cast<double>(d) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
         std::lgamma(static_cast<double>(d - i) + 1.0)) /
        std::log(2.0);
    const double hi = std::max(log2_ball, log2_binom);
    log2_ball = hi + std::log2(std::exp2(log2_ball - hi) + std::exp2(log2_binom - hi));
  }
  return std::log2(static_cast<double>(count)) + log2_ball <= static_cast<double>(d) + 1e-9;
}

// Greedy rejection sampling shared by the plain and codeword generators.
// `draw` returns one (key, data word) candidate from the given stream.
template <class Draw>
TemplateSet sample_templates(std::size_t count, std::size_t d, std::uint64_t seed, std::size_t min_distance,
                             const char* label, bool keep_words, Draw draw) {
  constexpr int kRestarts = 8;
  constexpr int kDrawsPerKey = 20000;
  for (int restart = 0; restart < kRestarts; ++restart) {
    auto rng = substream(seed, label, {static_cast<std::uint64_t>(restart)});
    std::vector<BitString> keys;
    std::vector<BitString> words;
    keys.reserve(count);
    bool stuck = false;
    while (keys.size() < count && !stuck) {
      stuck = true;
      for (int tries = 0; tries < kDrawsPerKey; ++tries) {
        auto [key, word] = draw(rng);
        bool far = true;
        for (const auto& k : keys) {
          if (hamming_distance(k, key) < min_distance) {
            far = false;
            break;
          }
        }
        if (far) {
          keys.push_back(std::move(key));
          words.push_back(std::move(word));
          stuck = false;
          break;
        }
      }
    }
    if (!stuck) {
      if (!keep_words) words.clear();
      return TemplateSet(std::move(keys), seed, min_distance, std::move(words));
    }
  }
  throw Error("generate_templates: infeasible in practice, could not place " + std::to_string(count) + " keys of length " +
              std::to_string(d) + " at pairwise distance >= " + std::to_string(min_distance) +
              " (seed " + std::to_string(seed) + ")");
}

}  // namespace detail

/// Uniform random keys with rejection on min_distance.
inline TemplateSet generate_templates(std::size_t count, std::size_t d, std::uint64_t seed,
                                      std::size_t min_distance) {
  if (count == 0) throw Error("generate_templates: M must be >= 1");
  if (d == 0) throw Error("generate_templates: d must be >= 1");
  if (min_distance > d) throw Error("generate_templates: min_distance exceeds key length");
  if (!detail::packing_bound_allows(count, d, min_distance)) {
    throw Error("generate_templates: infeasible (M=" + std::to_string(count) + ", d=" + std::to_string(d) +
                ", min_distance=" + std::to_string(min_distance) + ") violates the sphere-packing bound");
  }
  return detail::sample_templates(count, d, seed, min_distance, "templates", false, [d](SplitMix64& rng) {
    auto key = random_bits(d, rng);
    return std::pair{key, key};
  });
}

/// Keys that are codewords of `code` (d = n_code), built from uniform random
/// data words with rejection on min_distance between codewords.
inline TemplateSet generate_codeword_templates(const LdpcCode& code, std::size_t count, std::uint64_t seed,
                                               std::size_t min_distance) {
  if (count == 0) throw Error("generate_codeword_templates: M must be >= 1");
  if (min_distance > code.n_code()) throw Error("generate_codeword_templates: min_distance exceeds n_code");
  if (code.k_data() < 64 && count > (std::uint64_t{1} << code.k_data())) {
    throw Error("generate_codeword_templates: more templates than distinct data words");
  }
  return detail::sample_templates(count, code.n_code(), seed, min_distance, "codeword-templates", true,
                                  [&code](SplitMix64& rng) {
                                    auto word = random_bits(code.k_data(), rng);
                                    auto key = code.encode(DataWord(word)).bits();
                                    return std::pair{key, word};
                                  });
}

/// Per-frame template indices of a dynamic-mode clip.
class ControlSequence {
 public:
  ControlSequence(std::vector<std::size_t> indices, std::size_t template_count)
      : indices_(std::move(indices)), count_(template_count) {
    if (indices_.empty()) throw Error("ControlSequence: at least one frame is required");
    for (auto i : indices_) {
      if (i >= count_) throw Error("ControlSequence: index " + std::to_string(i) + " outside [0, M)");
    }
  }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t template_count() const noexcept { return count_; }
  std::size_t size() const noexcept { return indices_.size(); }
  friend bool operator==(const ControlSequence&, const ControlSequence&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t count_;
};

inline std::size_t bits_per_index(std::size_t template_count) {
  if (template_count < 2) throw Error("control channel: M must be >= 2");
  if (!std::has_single_bit(template_count)) {
    throw Error("control channel: M=" + std::to_string(template_count) + " is not a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(template_count));
}

/// Bits carried by the index sequence of F frames choosing among M templates.
inline std::size_t control_capacity(std::size_t template_count, std::size_t frames) {
  if (frames == 0) throw Error("control_capacity: F must be >= 1");
  return frames * bits_per_index(template_count);
}

/// Total template payload (M keys of `bits_per_template` data bits). This is
/// bookkeeping only; see README for the interpretation.
inline std::size_t template_payload_bits(std::size_t template_count, std::size_t bits_per_template) {
  return template_count * bits_per_template;
}

/// Index sequence -> bit string, log2(M) bits per frame, most significant first.
inline BitString control_to_bits(const ControlSequence& seq) {
  const std::size_t width = bits_per_index(seq.template_count());
  std::vector<std::uint8_t> bits;
  bits.reserve(seq.size() * width);
  for (auto idx : seq.indices()) {
    for (std::size_t b = width; b-- > 0;) bits.push_back(static_cast<std::uint8_t>((idx >> b) & 1u));
  }
  return BitString(std::move(bits));
}

inline ControlSequence control_from_bits(const BitString& bits, std::size_t template_count) {
  const std::size_t width = bits_per_index(template_count);
  if (bits.size() % width != 0) throw Error("control_from_bits: length is not a multiple of log2(M)");
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < bits.size(); i += width) {
    std::size_t v = 0;
    for (std::size_t b = 0; b < width; ++b) v = (v << 1) | bits[i + b];
    indices.push_back(v);
  }
  return ControlSequence(std::move(indices), template_count);
}

struct ControlFrame {
  long matched_index = -1;  // -1: best similarity below tau
  double similarity = 0.0;
};

struct ControlDecoding {
  ControlSequence sequence;  // nearest template per frame, regardless of tau
  std::vector<ControlFrame> frames;
};

inline ControlDecoding decode_control(const FrameKeyMatrix& extracted, const TemplateSet& templates, double tau) {
  if (extracted.key_length() != templates.key_length()) {
    throw Error("decode_control: extracted keys have " + std::to_string(extracted.key_length()) +
                " bits, templates have " + std::to_string(templates.key_length()));
  }
  std::vector<std::size_t> indices;
  std::vector<ControlFrame> frames;
  indices.reserve(extracted.size());
  frames.reserve(extracted.size());
  for (const auto& key : extracted.keys()) {
    const auto best = best_match(key, templates.keys());
    indices.push_back(best.index);
    frames.push_back({best.similarity < tau ? -1L : static_cast<long>(best.index), best.similarity});
  }
  return {ControlSequence(std::move(indices), templates.size()), std::move(frames)};
}

}  // namespace framemark
