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
#include <string>
#include <utility>
#include <vector>

#include "framemark/bits.hpp"
#include "framemark/error.hpp"

namespace framemark {

/// Fraction of positions at which two equal-length keys agree.
inline double hamming_similarity(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw Error("hamming_similarity: length mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  return static_cast<double>(a.size() - hamming_distance(a, b)) / static_cast<double>(a.size());
}

/// N extracted per-frame keys, all of one length d.
class FrameKeyMatrix {
 public:
  explicit FrameKeyMatrix(std::vector<BitString> keys) : keys_(std::move(keys)) {
    if (keys_.empty()) throw Error("FrameKeyMatrix: at least one key is required");
    for (const auto& k : keys_) {
      if (k.size() != keys_.front().size()) throw Error("FrameKeyMatrix: keys must share one length");
    }
  }

  std::size_t size() const noexcept { return keys_.size(); }
  std::size_t key_length() const noexcept { return keys_.front().size(); }
  const BitString& operator[](std::size_t i) const noexcept { return keys_[i]; }
  const std::vector<BitString>& keys() const noexcept { return keys_; }

 private:
  std::vector<BitString> keys_;
};

struct BestMatch {
  std::size_t index = 0;
  double similarity = 0.0;
};

/// Highest-similarity reference key; ties resolve to the lowest index.
inline BestMatch best_match(const BitString& key, const std::vector<BitString>& references) {
  if (references.empty()) throw Error("best_match: no reference keys");
  BestMatch best{0, -1.0};
  for (std::size_t j = 0; j < references.size(); ++j) {
    const double s = hamming_similarity(key, references[j]);
    if (s > best.similarity) best = {j, s};
  }
  return best;
}

}  // namespace framemark
