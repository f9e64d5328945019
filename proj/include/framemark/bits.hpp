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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "framemark/error.hpp"

namespace framemark {

/// An immutable, non-empty sequence of bits. Each element is 0 or 1.
class BitString {
 public:
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw Error("BitString: length must be >= 1");
    for (auto b : bits_) {
      if (b > 1) throw Error("BitString: elements must be 0 or 1");
    }
  }

  /// Parses a string of '0'/'1' characters.
  static BitString from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw Error("BitString: invalid character in bit string");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
  }

  /// The low `length` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t length) {
    if (length == 0 || length > 64) throw Error("BitString::from_uint: length must be in [1, 64]");
    std::vector<std::uint8_t> bits(length);
    for (std::size_t i = 0; i < length; ++i) {
      bits[i] = static_cast<std::uint8_t>((value >> (length - 1 - i)) & 1u);
    }
    return BitString(std::move(bits));
  }

  /// Hex decoding: bits fill bytes most-significant-bit first, the final
  /// byte zero-padded at the low end. Padding bits must be zero.
  static BitString from_hex(std::string_view hex, std::size_t length) {
    if (length == 0) throw Error("BitString::from_hex: length must be >= 1");
    const std::size_t nbytes = (length + 7) / 8;
    if (hex.size() != 2 * nbytes) {
      throw Error("BitString::from_hex: expected " + std::to_string(2 * nbytes) +
                  " hex digits for " + std::to_string(length) + " bits, got " +
                  std::to_string(hex.size()));
    }
    std::vector<std::uint8_t> bits(nbytes * 8);
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const int nibble = hex_value(hex[i]);
      for (int b = 0; b < 4; ++b) {
        bits[4 * i + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((nibble >> (3 - b)) & 1);
      }
    }
    for (std::size_t i = length; i < bits.size(); ++i) {
      if (bits[i] != 0) throw Error("BitString::from_hex: non-zero padding bits");
    }
    bits.resize(length);
    return BitString(std::move(bits));
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t nbytes = (bits_.size() + 7) / 8;
    std::string out;
    out.reserve(2 * nbytes);
    for (std::size_t nib = 0; nib < 2 * nbytes; ++nib) {
      int v = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t idx = 4 * nib + b;
        v = (v << 1) | (idx < bits_.size() ? bits_[idx] : 0);
      }
      out.push_back(kDigits[v]);
    }
    return out;
  }

  std::string to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = static_cast<char>('0' + bits_[i]);
    return out;
  }

  /// Inverse of from_uint for strings of at most 64 bits.
  std::uint64_t to_uint() const {
    if (bits_.size() > 64) throw Error("BitString::to_uint: more than 64 bits");
    std::uint64_t v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  std::uint8_t at(std::size_t i) const { return bits_.at(i); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  /// Bits [first, first + count).
  BitString slice(std::size_t first, std::size_t count) const {
    if (first + count > bits_.size()) throw Error("BitString::slice: out of range");
    return BitString(std::vector<std::uint8_t>(bits_.begin() + static_cast<std::ptrdiff_t>(first),
                                               bits_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

  BitString complemented() const {
    std::vector<std::uint8_t> out(bits_);
    for (auto& b : out) b ^= 1u;
    return BitString(std::move(out));
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(std::string("BitString::from_hex: invalid hex digit '") + c + "'");
  }

  std::vector<std::uint8_t> bits_;
};

inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw Error("hamming_distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::size_t>(a[i] != b[i]);
  return d;
}

inline BitString concat(std::span<const BitString> parts) {
  std::vector<std::uint8_t> out;
  for (const auto& p : parts) out.insert(out.end(), p.bits().begin(), p.bits().end());
  return BitString(std::move(out));
}

}  // namespace framemark
