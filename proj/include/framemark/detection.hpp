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
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"
#include "framemark/ldpc.hpp"

namespace framemark {

inline double bit_accuracy(const BitString& original, const BitString& extracted) {
  if (original.size() != extracted.size()) {
    throw Error("bit_accuracy: length mismatch (" + std::to_string(original.size()) + " vs " +
                std::to_string(extracted.size()) + ")");
  }
  const auto wrong = hamming_distance(original, extracted);
  return static_cast<double>(original.size() - wrong) / static_cast<double>(original.size());
}

/// Fraction of words decoded with every data bit correct.
inline double word_accuracy(std::span<const std::pair<DataWord, DecodeResult>> pairs) {
  if (pairs.empty()) throw Error("word_accuracy: empty list");
  std::size_t ok = 0;
  for (const auto& [sent, received] : pairs) ok += static_cast<std::size_t>(sent == received.word);
  return static_cast<double>(ok) / static_cast<double>(pairs.size());
}

/// Word accuracy without a code: the received bits are compared directly.
inline double word_accuracy(std::span<const std::pair<BitString, BitString>> pairs) {
  if (pairs.empty()) throw Error("word_accuracy: empty list");
  std::size_t ok = 0;
  for (const auto& [sent, received] : pairs) ok += static_cast<std::size_t>(sent == received);
  return static_cast<double>(ok) / static_cast<double>(pairs.size());
}

namespace detail {

inline double log_factorial(double n) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(n + 1.0, &sign);  // lgamma() writes the global signgam
#else
  return std::lgamma(n + 1.0);
#endif
}

inline double log_binomial(std::size_t n, std::size_t k) {
  return log_factorial(static_cast<double>(n)) - log_factorial(static_cast<double>(k)) -
         log_factorial(static_cast<double>(n - k));
}

// ln sum_{k in [lo, hi]} C(L, k) 2^-L, where the largest term sits at `from`
// (one end of the range) and terms shrink monotonically away from it.
// Streams outward and stops once terms fall 40 nats below the running sum.
inline double log_tail_from_peak(std::size_t length, std::size_t from, bool upward, std::size_t stop) {
  constexpr double kCutoff = 40.0;
  const double log_half_pow = -static_cast<double>(length) * std::numbers::ln2;
  double term = log_binomial(length, from) + log_half_pow;
  double acc = term;
  std::size_t k = from;
  while (k != stop) {
    // C(L, k+1) = C(L, k) (L - k) / (k + 1);  C(L, k-1) = C(L, k) k / (L - k + 1)
    if (upward) {
      term += std::log(static_cast<double>(length - k) / static_cast<double>(k + 1));
      ++k;
    } else {
      term += std::log(static_cast<double>(k) / static_cast<double>(length - k + 1));
      --k;
    }
    if (term < acc - kCutoff) break;
    acc = acc + std::log1p(std::exp(term - acc));
  }
  return acc;
}

}  // namespace detail

/// First success count included in the tail: ceil(a L), with values within
/// floating-point noise of an integer snapped to it, so a = k / L starts at k.
inline std::size_t tail_start(std::size_t length, double accuracy) {
  const double scaled = accuracy * static_cast<double>(length);
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, scaled)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(scaled));
}

/// log10 P[Binomial(L, 1/2) >= ceil(a L)]: the chance that guessing matches at
/// least the observed accuracy. Computed in the log domain throughout; when
/// the tail holds more than half the mass it is taken as the complement of
/// the lower tail so that values near zero keep their relative precision.
inline double log_p_value(std::size_t length, double accuracy) {
  if (length == 0) throw Error("log_p_value: L must be >= 1");
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) throw Error("log_p_value: accuracy must lie in [0, 1]");
  const std::size_t start = tail_start(length, accuracy);
  if (start == 0) return 0.0;
  if (2 * start > length) {
    return detail::log_tail_from_peak(length, start, true, length) / std::numbers::ln10;
  }
  const double log_lower = detail::log_tail_from_peak(length, start - 1, false, 0);
  return std::log1p(-std::exp(log_lower)) / std::numbers::ln10;
}

struct DetectionReport {
  std::size_t total_bits = 0;     // L
  std::size_t correct_bits = 0;
  double bit_accuracy = 0.0;      // a
  std::optional<double> word_accuracy;
  std::size_t word_count = 0;     // words behind word_accuracy (0 when absent)
  double log10_p = 0.0;
};

inline DetectionReport make_report(std::size_t total_bits, std::size_t correct_bits,
                                   std::optional<double> word_accuracy = std::nullopt,
                                   std::size_t word_count = 0) {
  if (total_bits == 0) throw Error("DetectionReport: L must be >= 1");
  if (correct_bits > total_bits) throw Error("DetectionReport: more correct bits than bits");
  DetectionReport r;
  r.total_bits = total_bits;
  r.correct_bits = correct_bits;
  r.bit_accuracy = static_cast<double>(correct_bits) / static_cast<double>(total_bits);
  if (word_accuracy) {
    r.word_accuracy = word_accuracy;
    r.word_count = word_count == 0 ? 1 : word_count;
  }
  r.log10_p = log_p_value(total_bits, r.bit_accuracy);
  return r;
}

inline DetectionReport detect(const BitString& original, const BitString& extracted) {
  const auto wrong = hamming_distance(original, extracted);
  return make_report(original.size(), original.size() - wrong);
}

/// Pools per-frame reports: L and correct bits add up, log P is recomputed on
/// the pooled (L, a). Word accuracy is pooled word-weighted and must be
/// present on all inputs or on none.
inline DetectionReport aggregate(std::span<const DetectionReport> reports) {
  if (reports.empty()) throw Error("aggregate: no reports");
  const bool with_words = reports.front().word_accuracy.has_value();
  std::size_t total = 0;
  std::size_t correct = 0;
  double words_ok = 0.0;
  std::size_t words = 0;
  for (const auto& r : reports) {
    if (r.word_accuracy.has_value() != with_words) {
      throw Error("aggregate: reports disagree on whether word accuracy is present");
    }
    total += r.total_bits;
    correct += r.correct_bits;
    if (with_words) {
      words_ok += *r.word_accuracy * static_cast<double>(r.word_count);
      words += r.word_count;
    }
  }
  if (with_words) return make_report(total, correct, words_ok / static_cast<double>(words), words);
  return make_report(total, correct);
}

}  // namespace framemark
