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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"
#include "framemark/rng.hpp"

namespace framemark {

using Gf2Matrix = std::vector<std::vector<std::uint8_t>>;

namespace detail {

// Inverse of a square GF(2) matrix by Gauss-Jordan elimination; nullopt when
// singular.
inline std::optional<Gf2Matrix> gf2_inverse(const Gf2Matrix& a) {
  const std::size_t n = a.size();
  Gf2Matrix work(a);
  Gf2Matrix inv(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r != col && work[r][col]) {
        for (std::size_t c = 0; c < n; ++c) {
          work[r][c] ^= work[col][c];
          inv[r][c] ^= inv[col][c];
        }
      }
    }
  }
  return inv;
}

inline std::size_t gf2_rank(Gf2Matrix a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r != rank && a[r][col]) {
        for (std::size_t c = 0; c < cols; ++c) a[r][c] ^= a[rank][c];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// The information bits carried by one codeword.
class DataWord {
 public:
  explicit DataWord(BitString bits) : bits_(std::move(bits)) {}
  const BitString& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  friend bool operator==(const DataWord&, const DataWord&) = default;

 private:
  BitString bits_;
};

class LdpcCode;

/// A block that satisfies every parity check of the code that produced it.
/// Only LdpcCode can create one.
class Codeword {
 public:
  const BitString& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  friend bool operator==(const Codeword&, const Codeword&) = default;

 private:
  friend class LdpcCode;
  explicit Codeword(BitString bits) : bits_(std::move(bits)) {}
  BitString bits_;
};

struct DecodeResult {
  DataWord word;
  std::size_t corrected_bit_count = 0;
  bool converged = false;
  std::size_t iterations = 0;
  BitString hard_decision;  // full n_code-bit decision after the last iteration
};

struct DecoderConfig {
  std::size_t max_bp_iterations = 50;
  double channel_crossover_prior = 0.05;
};

/// Binary LDPC code in systematic form: codeword positions [0, k_data) carry
/// the data word, the remaining n_code - k_data positions carry parity.
class LdpcCode {
 public:
  std::size_t k_data() const noexcept { return k_; }
  std::size_t n_code() const noexcept { return n_; }
  std::size_t parity_count() const noexcept { return n_ - k_; }
  double rate() const noexcept { return static_cast<double>(k_) / static_cast<double>(n_); }
  std::uint64_t seed() const noexcept { return seed_; }
  const Gf2Matrix& parity_matrix() const noexcept { return h_; }
  const DecoderConfig& decoder() const noexcept { return decoder_; }

  LdpcCode with_decoder(DecoderConfig config) const {
    validate_decoder(config);
    LdpcCode copy(*this);
    copy.decoder_ = config;
    return copy;
  }

  BitString syndrome(const BitString& word) const {
    check_block_length(word, "syndrome");
    std::vector<std::uint8_t> s(h_.size(), 0);
    for (std::size_t r = 0; r < check_vars_.size(); ++r) {
      std::uint8_t acc = 0;
      for (auto v : check_vars_[r]) acc ^= word[v];
      s[r] = acc;
    }
    return BitString(std::move(s));
  }

  bool is_codeword(const BitString& word) const {
    check_block_length(word, "is_codeword");
    for (const auto& vars : check_vars_) {
      std::uint8_t acc = 0;
      for (auto v : vars) acc ^= word[v];
      if (acc) return false;
    }
    return true;
  }

  /// Validating conversion of a raw block into a Codeword.
  Codeword make_codeword(BitString bits) const {
    if (!is_codeword(bits)) throw Error("make_codeword: block violates parity checks");
    return Codeword(std::move(bits));
  }

  Codeword encode(const DataWord& word) const {
    if (word.size() != k_) {
      throw Error("ldpc_encode: data word has " + std::to_string(word.size()) + " bits, code expects " +
                  std::to_string(k_));
    }
    std::vector<std::uint8_t> out(n_, 0);
    for (std::size_t i = 0; i < k_; ++i) out[i] = word.bits()[i];
    for (std::size_t j = 0; j < generator_parity_.size(); ++j) {
      std::uint8_t acc = 0;
      for (std::size_t i = 0; i < k_; ++i) acc ^= static_cast<std::uint8_t>(generator_parity_[j][i] & out[i]);
      out[k_ + j] = acc;
    }
    return Codeword(BitString(std::move(out)));
  }

  /// Sum-product belief propagation on a binary symmetric channel. A valid
  /// codeword is returned immediately; otherwise decoding stops on the first
  /// iteration whose hard decision satisfies every check, or after
  /// max_bp_iterations with converged = false.
  DecodeResult decode(const BitString& received) const {
    check_block_length(received, "ldpc_decode");
    if (is_codeword(received)) {
      return DecodeResult{DataWord(received.slice(0, k_)), 0, true, 0, received};
    }

    const double p = decoder_.channel_crossover_prior;
    const double prior_llr = std::log((1.0 - p) / p);
    std::vector<double> channel(n_);
    for (std::size_t v = 0; v < n_; ++v) channel[v] = received[v] ? -prior_llr : prior_llr;

    std::vector<double> v2c(edge_var_.size());
    std::vector<double> c2v(edge_var_.size(), 0.0);
    for (std::size_t e = 0; e < edge_var_.size(); ++e) v2c[e] = channel[edge_var_[e]];

    std::vector<std::uint8_t> hard(received.bits().begin(), received.bits().end());
    std::vector<double> t;
    std::vector<double> prefix;
    bool converged = false;
    std::size_t it = 0;
    constexpr double kMaxTanh = 1.0 - 1e-12;

    while (it < decoder_.max_bp_iterations && !converged) {
      ++it;
      for (const auto& edges : check_edges_) {
        const std::size_t deg = edges.size();
        t.resize(deg);
        prefix.resize(deg + 1);
        for (std::size_t i = 0; i < deg; ++i) t[i] = std::tanh(0.5 * v2c[edges[i]]);
        prefix[0] = 1.0;
        for (std::size_t i = 0; i < deg; ++i) prefix[i + 1] = prefix[i] * t[i];
        double suffix = 1.0;
        for (std::size_t i = deg; i-- > 0;) {
          const double prod = std::clamp(prefix[i] * suffix, -kMaxTanh, kMaxTanh);
          c2v[edges[i]] = 2.0 * std::atanh(prod);
          suffix *= t[i];
        }
      }
      for (std::size_t v = 0; v < n_; ++v) {
        double total = channel[v];
        for (auto e : var_edges_[v]) total += c2v[e];
        hard[v] = total < 0.0 ? 1 : 0;
        for (auto e : var_edges_[v]) v2c[e] = total - c2v[e];
      }
      converged = true;
      for (const auto& vars : check_vars_) {
        std::uint8_t acc = 0;
        for (auto v : vars) acc ^= hard[v];
        if (acc) {
          converged = false;
          break;
        }
      }
    }

    BitString decision(std::move(hard));
    const std::size_t corrected = hamming_distance(decision, received);
    return DecodeResult{DataWord(decision.slice(0, k_)), corrected, converged, it, decision};
  }

 private:
  friend LdpcCode build_ldpc(std::uint64_t, std::size_t, std::size_t, DecoderConfig);

  LdpcCode(std::uint64_t seed, std::size_t k, std::size_t n, Gf2Matrix h, Gf2Matrix generator_parity,
           DecoderConfig decoder)
      : seed_(seed), k_(k), n_(n), h_(std::move(h)), generator_parity_(std::move(generator_parity)),
        decoder_(decoder) {
    check_vars_.resize(h_.size());
    check_edges_.resize(h_.size());
    var_edges_.resize(n_);
    for (std::size_t r = 0; r < h_.size(); ++r) {
      for (std::size_t c = 0; c < n_; ++c) {
        if (h_[r][c]) {
          const std::size_t e = edge_var_.size();
          edge_var_.push_back(c);
          check_vars_[r].push_back(c);
          check_edges_[r].push_back(e);
          var_edges_[c].push_back(e);
        }
      }
    }
  }

  static void validate_decoder(const DecoderConfig& config) {
    if (config.max_bp_iterations == 0) throw Error("LDPC decoder: max_bp_iterations must be >= 1");
    if (!(config.channel_crossover_prior > 0.0 && config.channel_crossover_prior < 0.5)) {
      throw Error("LDPC decoder: channel_crossover_prior must lie in (0, 0.5)");
    }
  }

  void check_block_length(const BitString& word, const char* what) const {
    if (word.size() != n_) {
      throw Error(std::string(what) + ": block has " + std::to_string(word.size()) + " bits, code expects " +
                  std::to_string(n_));
    }
  }

  std::uint64_t seed_;
  std::size_t k_;
  std::size_t n_;
  Gf2Matrix h_;
  Gf2Matrix generator_parity_;  // (n - k) x k: parity = generator_parity_ * data
  DecoderConfig decoder_;

  std::vector<std::vector<std::size_t>> check_vars_;
  std::vector<std::vector<std::size_t>> check_edges_;
  std::vector<std::vector<std::size_t>> var_edges_;
  std::vector<std::size_t> edge_var_;
};

/// Seeded regular Gallager-style construction: every column has weight
/// min(3, n - k), rows split the edges as evenly as possible, 4-cycles are
/// avoided where the greedy placement allows it. Attempts whose parity part
/// (columns [k, n)) is singular are discarded and redrawn.
inline LdpcCode build_ldpc(std::uint64_t seed, std::size_t k_data, std::size_t n_code,
                           DecoderConfig decoder = {}) {
  if (k_data == 0 || k_data >= n_code) {
    throw Error("build_ldpc: need 0 < k_data < n_code (got k_data=" + std::to_string(k_data) +
                ", n_code=" + std::to_string(n_code) + ")");
  }
  const std::size_t m = n_code - k_data;
  if (m < 2) throw Error("build_ldpc: at least 2 parity rows are required for column weight >= 2");
  LdpcCode::validate_decoder(decoder);

  const std::size_t col_weight = std::min<std::size_t>(3, m);
  constexpr int kMaxAttempts = 500;
  constexpr int kCycleFreeTries = 64;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto rng = substream(seed, "ldpc-construct", {static_cast<std::uint64_t>(attempt)});

    std::vector<std::size_t> row_order(m);
    for (std::size_t r = 0; r < m; ++r) row_order[r] = r;
    shuffle(row_order, rng);
    const std::size_t edges = n_code * col_weight;
    std::vector<std::size_t> remaining(m, edges / m);
    for (std::size_t i = 0; i < edges % m; ++i) ++remaining[row_order[i]];

    Gf2Matrix h(m, std::vector<std::uint8_t>(n_code, 0));
    std::vector<std::vector<std::uint8_t>> pair_used(m, std::vector<std::uint8_t>(m, 0));
    bool failed = false;

    for (std::size_t col = 0; col < n_code && !failed; ++col) {
      std::vector<std::size_t> chosen;
      std::vector<std::size_t> fallback;
      for (int tries = 0; tries < kCycleFreeTries; ++tries) {
        chosen.clear();
        std::vector<std::size_t> weight(remaining);
        for (std::size_t j = 0; j < col_weight; ++j) {
          std::size_t total = 0;
          for (auto w : weight) total += w;
          if (total == 0) break;
          auto pick = uniform_below(rng, total);
          std::size_t r = 0;
          while (pick >= weight[r]) pick -= weight[r++];
          chosen.push_back(r);
          weight[r] = 0;
        }
        if (chosen.size() < col_weight) break;
        if (fallback.empty()) fallback = chosen;
        bool cycle_free = true;
        for (std::size_t a = 0; a < chosen.size() && cycle_free; ++a) {
          for (std::size_t b = a + 1; b < chosen.size(); ++b) {
            if (pair_used[chosen[a]][chosen[b]]) {
              cycle_free = false;
              break;
            }
          }
        }
        if (cycle_free) {
          fallback = chosen;
          break;
        }
      }
      if (fallback.size() < col_weight) {
        failed = true;
        break;
      }
      for (std::size_t a = 0; a < fallback.size(); ++a) {
        h[fallback[a]][col] = 1;
        --remaining[fallback[a]];
        for (std::size_t b = 0; b < fallback.size(); ++b) {
          if (a != b) pair_used[fallback[a]][fallback[b]] = 1;
        }
      }
    }
    if (failed) continue;

    Gf2Matrix parity_part(m, std::vector<std::uint8_t>(m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) parity_part[r][c] = h[r][k_data + c];
    }
    auto inv = detail::gf2_inverse(parity_part);
    if (!inv) continue;

    // H = [A | B], H c = 0  =>  parity = B^-1 A data.
    Gf2Matrix gen(m, std::vector<std::uint8_t>(k_data, 0));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < k_data; ++c) {
        std::uint8_t acc = 0;
        for (std::size_t t = 0; t < m; ++t) acc ^= static_cast<std::uint8_t>((*inv)[r][t] & h[t][c]);
        gen[r][c] = acc;
      }
    }
    return LdpcCode(seed, k_data, n_code, std::move(h), std::move(gen), decoder);
  }
  throw Error("build_ldpc: no full-rank systematic parity-check matrix found for seed " + std::to_string(seed) +
              " after " + std::to_string(kMaxAttempts) + " attempts");
}

inline Codeword ldpc_encode(const LdpcCode& code, const DataWord& word) { return code.encode(word); }

inline DecodeResult ldpc_decode(const LdpcCode& code, const BitString& received) {
  return code.decode(received);
}

}  // namespace framemark
