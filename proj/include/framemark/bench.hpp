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
#include <optional>
#include <string>
#include <vector>

#include "framemark/detection.hpp"
#include "framemark/distort.hpp"
#include "framemark/error.hpp"
#include "framemark/frame.hpp"
#include "framemark/ldpc.hpp"
#include "framemark/parallel.hpp"

namespace framemark {

struct EmbeddedClip {
  std::vector<Frame> frames;
  std::vector<Codeword> codewords;
  std::vector<double> psnr;
};

/// Frame i carries the LDPC codeword of payload word i.
inline EmbeddedClip embed_clip(const std::vector<Frame>& clip, const std::vector<DataWord>& payloads,
                               const LdpcCode& code, const EmbedParams& params, std::size_t threads = 1) {
  if (payloads.empty()) throw Error("embed_clip: no payload words");
  if (payloads.size() != clip.size()) {
    throw Error("embed_clip: " + std::to_string(payloads.size()) + " payload words for " +
                std::to_string(clip.size()) + " frames");
  }
  if (params.bits_per_frame != code.n_code()) throw Error("embed_clip: bits_per_frame differs from n_code");
  EmbeddedClip out;
  for (const auto& w : payloads) out.codewords.push_back(code.encode(w));
  out.frames.assign(clip.begin(), clip.end());
  out.psnr.resize(clip.size());
  parallel_for(clip.size(), threads, [&](std::size_t i) {
    out.frames[i] = embed_frame(clip[i], out.codewords[i].bits(), params);
    out.psnr[i] = psnr(clip[i], out.frames[i]);
  });
  return out;
}

/// Scores extracted keys against the embedded codewords: pooled bit
/// accuracy and log P over all codeword bits, word accuracy after LDPC
/// decoding.
inline DetectionReport score_extraction(const std::vector<BitString>& extracted, const std::vector<Codeword>& sent,
                                        const LdpcCode& code) {
  if (extracted.size() != sent.size() || sent.empty()) throw Error("score_extraction: count mismatch");
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t words_ok = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    total += sent[i].size();
    correct += sent[i].size() - hamming_distance(sent[i].bits(), extracted[i]);
    words_ok += static_cast<std::size_t>(code.decode(extracted[i]).word.bits() ==
                                         sent[i].bits().slice(0, code.k_data()));
  }
  return make_report(total, correct, static_cast<double>(words_ok) / static_cast<double>(sent.size()), sent.size());
}

struct BenchRow {
  std::string distortion;
  DistortionStatus status = DistortionStatus::kApplied;
  std::string message;
  std::optional<DetectionReport> report;  // absent when skipped
};

/// Embeds every frame, then for each distortion distorts a fresh copy of the
/// watermarked clip, extracts and scores. A "clean" row (no distortion)
/// comes first when requested or when the list is empty.
inline std::vector<BenchRow> run_robustness_bench(const std::vector<Frame>& clip, const std::vector<DataWord>& payloads,
                                                  const LdpcCode& code, const EmbedParams& params,
                                                  const std::vector<DistortionSpec>& distortions,
                                                  std::size_t threads = 1, bool clean_row = false) {
  const auto embedded = embed_clip(clip, payloads, code, params, threads);
  auto score = [&](const std::vector<Frame>& frames) {
    std::vector<BitString> keys(frames.size(), BitString(std::vector<std::uint8_t>{0}));
    parallel_for(frames.size(), threads, [&](std::size_t i) { keys[i] = extract_frame(frames[i], params); });
    return score_extraction(keys, embedded.codewords, code);
  };

  std::vector<BenchRow> rows;
  if (clean_row || distortions.empty()) rows.push_back({"clean", DistortionStatus::kApplied, "", score(embedded.frames)});
  for (const auto& spec : distortions) {
    auto outcome = distort(embedded.frames, spec);
    BenchRow row{spec.label, outcome.status, outcome.message, std::nullopt};
    if (outcome.status == DistortionStatus::kApplied) row.report = score(outcome.frames);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace framemark
