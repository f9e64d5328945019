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
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"
#include "framemark/rng.hpp"

namespace framemark {

/// 8-bit RGB image, row-major, channels interleaved.
class Frame {
 public:
  static constexpr std::size_t kChannels = 3;

  Frame(std::size_t height, std::size_t width, std::vector<std::uint8_t> samples)
      : height_(height), width_(width), samples_(std::move(samples)) {
    if (height_ == 0 || width_ == 0) throw Error("Frame: dimensions must be positive");
    if (samples_.size() != height_ * width_ * kChannels) throw Error("Frame: sample count does not match size");
  }

  static Frame filled(std::size_t height, std::size_t width, std::uint8_t value) {
    return Frame(height, width, std::vector<std::uint8_t>(height * width * kChannels, value));
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t index(std::size_t y, std::size_t x, std::size_t c) const noexcept {
    return (y * width_ + x) * kChannels + c;
  }
  std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const noexcept { return samples_[index(y, x, c)]; }
  std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) noexcept { return samples_[index(y, x, c)]; }
  const std::vector<std::uint8_t>& samples() const noexcept { return samples_; }
  std::vector<std::uint8_t>& samples() noexcept { return samples_; }

  double luma(std::size_t y, std::size_t x) const noexcept {
    return 0.299 * at(y, x, 0) + 0.587 * at(y, x, 1) + 0.114 * at(y, x, 2);
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> samples_;
};

inline std::uint8_t quantize_sample(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

/// Peak signal-to-noise ratio in dB over all channels; +inf for identical
/// frames.
inline double psnr(const Frame& a, const Frame& b) {
  if (a.height() != b.height() || a.width() != b.width()) throw Error("psnr: frame sizes differ");
  double se = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    const double d = static_cast<double>(a.samples()[i]) - static_cast<double>(b.samples()[i]);
    se += d * d;
  }
  if (se == 0.0) return INFINITY;
  const double mse = se / static_cast<double>(a.samples().size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// ---------------------------------------------------------------------------
// 8x8 orthonormal DCT-II

using Block8 = std::array<double, 64>;

namespace detail {

inline const std::array<double, 64>& dct_basis() {
  static const std::array<double, 64> basis = [] {
    std::array<double, 64> b{};
    for (int u = 0; u < 8; ++u) {
      const double scale = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) b[u * 8 + x] = scale * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
    return b;
  }();
  return basis;
}

}  // namespace detail

/// Coefficient (u, v) at index u * 8 + v; u is the vertical frequency.
inline Block8 dct8x8(const Block8& pixels) {
  const auto& c = detail::dct_basis();
  Block8 tmp{};
  Block8 out{};
  for (int y = 0; y < 8; ++y) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += c[v * 8 + x] * pixels[y * 8 + x];
      tmp[y * 8 + v] = s;
    }
  }
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += c[u * 8 + y] * tmp[y * 8 + v];
      out[u * 8 + v] = s;
    }
  }
  return out;
}

inline Block8 idct8x8(const Block8& coeffs) {
  const auto& c = detail::dct_basis();
  Block8 tmp{};
  Block8 out{};
  for (int y = 0; y < 8; ++y) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += c[u * 8 + y] * coeffs[u * 8 + v];
      tmp[y * 8 + v] = s;
    }
  }
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += c[v * 8 + x] * tmp[y * 8 + v];
      out[y * 8 + x] = s;
    }
  }
  return out;
}

/// Luma samples of the 8x8 block whose top-left pixel is (8 by, 8 bx).
inline Block8 luma_block(const Frame& frame, std::size_t by, std::size_t bx) {
  Block8 b{};
  for (std::size_t y = 0; y < 8; ++y) {
    for (std::size_t x = 0; x < 8; ++x) b[y * 8 + x] = frame.luma(8 * by + y, 8 * bx + x);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Spread-spectrum embedder

struct Coefficient {
  int u = 0;
  int v = 0;
  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

/// Low-to-mid frequencies u + v in {2, 3, 4} minus (0, 4)/(4, 0): twelve
/// positions that survive JPEG at quality 50 reasonably well.
inline std::vector<Coefficient> default_midband() {
  return {{0, 2}, {1, 1}, {2, 0}, {0, 3}, {1, 2}, {2, 1}, {3, 0}, {1, 3}, {2, 2}, {3, 1}, {0, 4}, {4, 0}};
}

inline constexpr double kDefaultAlpha = 4.0;

struct EmbedParams {
  std::size_t bits_per_frame = 48;
  std::size_t block_size = 8;
  double alpha = kDefaultAlpha;
  std::uint64_t pn_seed = 0;
  std::vector<Coefficient> midband = default_midband();

  friend bool operator==(const EmbedParams&, const EmbedParams&) = default;
};

/// Assignment of 8x8 blocks to payload bits for a given frame size: a seeded
/// permutation of all blocks dealt round-robin, each bit getting
/// floor(blocks / bits) blocks. Leftover blocks stay untouched.
struct BlockLayout {
  std::size_t blocks_x = 0;
  std::size_t blocks_y = 0;
  std::vector<std::vector<std::size_t>> groups;  // per bit: block indices (by * blocks_x + bx)
};

inline void validate(const EmbedParams& params) {
  if (params.block_size != 8) throw Error("EmbedParams: only 8x8 blocks are supported");
  if (params.bits_per_frame == 0) throw Error("EmbedParams: bits_per_frame must be >= 1");
  if (!(params.alpha >= 0.0)) throw Error("EmbedParams: alpha must be non-negative");
  if (params.midband.empty()) throw Error("EmbedParams: midband coefficient set is empty");
  for (const auto& c : params.midband) {
    if (c.u < 0 || c.u > 7 || c.v < 0 || c.v > 7 || (c.u == 0 && c.v == 0)) {
      throw Error("EmbedParams: midband positions must be AC coefficients inside the 8x8 block");
    }
  }
}

/// Smallest square frame side that holds the payload.
inline std::size_t minimum_side(const EmbedParams& params) {
  std::size_t side = 64;
  while ((side / 8) * (side / 8) < params.bits_per_frame) side += 8;
  return side;
}

inline BlockLayout make_layout(const EmbedParams& params, std::size_t height, std::size_t width) {
  validate(params);
  BlockLayout layout;
  layout.blocks_x = width / 8;
  layout.blocks_y = height / 8;
  const std::size_t blocks = layout.blocks_x * layout.blocks_y;
  if (height < 64 || width < 64 || blocks < params.bits_per_frame) {
    const auto side = std::to_string(minimum_side(params));
    throw Error("frame of " + std::to_string(height) + "x" + std::to_string(width) + " is too small for " +
                std::to_string(params.bits_per_frame) + " bits; minimum is " + side + "x" + side);
  }
  std::vector<std::size_t> order(blocks);
  for (std::size_t i = 0; i < blocks; ++i) order[i] = i;
  auto rng = substream(params.pn_seed, "block-layout", {layout.blocks_y, layout.blocks_x});
  shuffle(order, rng);
  const std::size_t per_bit = blocks / params.bits_per_frame;
  layout.groups.assign(params.bits_per_frame, {});
  for (std::size_t i = 0; i < per_bit * params.bits_per_frame; ++i) {
    layout.groups[i % params.bits_per_frame].push_back(order[i]);
  }
  return layout;
}

/// +-1 chips of one block, one per midband coefficient.
inline std::vector<double> block_pattern(const EmbedParams& params, std::size_t block) {
  auto rng = substream(params.pn_seed, "pattern", {block});
  std::vector<double> chips(params.midband.size());
  std::uint64_t word = rng();
  for (std::size_t i = 0; i < chips.size(); ++i) {
    if (i > 0 && i % 64 == 0) word = rng();
    chips[i] = ((word >> (i % 64)) & 1u) ? 1.0 : -1.0;
  }
  return chips;
}

/// Adds +alpha * pattern (bit 1) or -alpha * pattern (bit 0) to the midband
/// luma coefficients of every block of the bit's group. The luma change is
/// applied equally to R, G and B.
inline Frame embed_frame(const Frame& frame, const BitString& payload, const EmbedParams& params) {
  if (payload.size() != params.bits_per_frame) {
    throw Error("embed_frame: payload has " + std::to_string(payload.size()) + " bits, params expect " +
                std::to_string(params.bits_per_frame));
  }
  const auto layout = make_layout(params, frame.height(), frame.width());
  Frame out(frame);
  if (params.alpha == 0.0) return out;
  for (std::size_t bit = 0; bit < layout.groups.size(); ++bit) {
    const double sign = payload[bit] ? 1.0 : -1.0;
    for (auto block : layout.groups[bit]) {
      const auto chips = block_pattern(params, block);
      Block8 delta{};
      for (std::size_t i = 0; i < chips.size(); ++i) {
        const auto& c = params.midband[i];
        delta[static_cast<std::size_t>(c.u * 8 + c.v)] = sign * params.alpha * chips[i];
      }
      const auto spatial = idct8x8(delta);
      const std::size_t by = block / layout.blocks_x;
      const std::size_t bx = block % layout.blocks_x;
      for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 8; ++x) {
          for (std::size_t ch = 0; ch < Frame::kChannels; ++ch) {
            auto& s = out.at(8 * by + y, 8 * bx + x, ch);
            s = quantize_sample(static_cast<double>(frame.at(8 * by + y, 8 * bx + x, ch)) + spatial[y * 8 + x]);
          }
        }
      }
    }
  }
  return out;
}

/// Per-bit correlation between the midband luma coefficients and the bit's
/// pattern. Positive means 1.
inline std::vector<double> correlate_frame(const Frame& frame, const EmbedParams& params) {
  const auto layout = make_layout(params, frame.height(), frame.width());
  std::vector<double> corr(layout.groups.size(), 0.0);
  for (std::size_t bit = 0; bit < layout.groups.size(); ++bit) {
    for (auto block : layout.groups[bit]) {
      const auto coeffs = dct8x8(luma_block(frame, block / layout.blocks_x, block % layout.blocks_x));
      const auto chips = block_pattern(params, block);
      for (std::size_t i = 0; i < chips.size(); ++i) {
        const auto& c = params.midband[i];
        corr[bit] += chips[i] * coeffs[static_cast<std::size_t>(c.u * 8 + c.v)];
      }
    }
  }
  return corr;
}

/// Blind extraction; a zero correlation decodes as 0.
inline BitString extract_frame(const Frame& frame, const EmbedParams& params) {
  const auto corr = correlate_frame(frame, params);
  std::vector<std::uint8_t> bits(corr.size());
  for (std::size_t i = 0; i < corr.size(); ++i) bits[i] = corr[i] > 0.0 ? 1 : 0;
  return BitString(std::move(bits));
}

}  // namespace framemark
