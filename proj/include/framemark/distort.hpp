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
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "framemark/error.hpp"
#include "framemark/frame.hpp"
#include "framemark/image_io.hpp"
#include "framemark/rng.hpp"

namespace framemark {

enum class DistortionKind {
  kResize,
  kJpeg,
  kCrop,
  kRotation,
  kBrightness,
  kContrast,
  kSaturation,
  kSharpness,
  kGaussianNoise,
  kMpeg4,
};

struct DistortionSpec {
  DistortionKind kind = DistortionKind::kResize;
  double parameter = 1.0;  // factor, quality, degrees or sigma depending on kind
  std::uint64_t seed = 0;  // Gaussian noise only
  std::string label;       // row name in reports, e.g. "rotation25"
};

inline bool is_geometric(DistortionKind k) {
  return k == DistortionKind::kResize || k == DistortionKind::kCrop || k == DistortionKind::kRotation;
}

inline bool is_photometric(DistortionKind k) {
  return k == DistortionKind::kBrightness || k == DistortionKind::kContrast ||
         k == DistortionKind::kSaturation || k == DistortionKind::kSharpness;
}

/// The eleven-distortion robustness suite; labels match the channel presets.
inline std::vector<DistortionSpec> standard_distortion_suite(std::uint64_t seed = 0) {
  return {
      {DistortionKind::kResize, 0.7, seed, "resize"},
      {DistortionKind::kJpeg, 50, seed, "jpeg"},
      {DistortionKind::kCrop, 0.7, seed, "crop"},
      {DistortionKind::kRotation, 25, seed, "rotation25"},
      {DistortionKind::kRotation, 90, seed, "rotation90"},
      {DistortionKind::kBrightness, 2.0, seed, "brightness"},
      {DistortionKind::kContrast, 2.0, seed, "contrast"},
      {DistortionKind::kSaturation, 2.0, seed, "saturation"},
      {DistortionKind::kSharpness, 2.0, seed, "sharpness"},
      {DistortionKind::kGaussianNoise, 0.1, seed, "gaussian_noise"},
      {DistortionKind::kMpeg4, 0, seed, "mpeg4"},
  };
}

inline DistortionSpec distortion_by_label(std::string_view label, std::uint64_t seed = 0) {
  for (auto& spec : standard_distortion_suite(seed)) {
    if (spec.label == label) return spec;
  }
  throw Error("unknown distortion '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Per-frame operators

inline Frame resize_bilinear(const Frame& in, std::size_t out_h, std::size_t out_w) {
  if (out_h == 0 || out_w == 0) throw Error("resize: target size must be positive");
  std::vector<std::uint8_t> out(out_h * out_w * Frame::kChannels);
  const double sy = static_cast<double>(in.height()) / static_cast<double>(out_h);
  const double sx = static_cast<double>(in.width()) / static_cast<double>(out_w);
  for (std::size_t y = 0; y < out_h; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, static_cast<double>(in.height() - 1));
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, in.height() - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, static_cast<double>(in.width() - 1));
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, in.width() - 1);
      const double wx = fx - static_cast<double>(x0);
      for (std::size_t c = 0; c < Frame::kChannels; ++c) {
        const double top = (1 - wx) * in.at(y0, x0, c) + wx * in.at(y0, x1, c);
        const double bottom = (1 - wx) * in.at(y1, x0, c) + wx * in.at(y1, x1, c);
        out[(y * out_w + x) * Frame::kChannels + c] = quantize_sample((1 - wy) * top + wy * bottom);
      }
    }
  }
  return Frame(out_h, out_w, std::move(out));
}

inline std::size_t scaled_dim(std::size_t n, double factor) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) * factor)));
}

inline Frame center_crop(const Frame& in, double factor) {
  const std::size_t h = std::min(in.height(), scaled_dim(in.height(), factor));
  const std::size_t w = std::min(in.width(), scaled_dim(in.width(), factor));
  const std::size_t oy = (in.height() - h) / 2;
  const std::size_t ox = (in.width() - w) / 2;
  std::vector<std::uint8_t> out(h * w * Frame::kChannels);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < Frame::kChannels; ++c) out[(y * w + x) * Frame::kChannels + c] = in.at(oy + y, ox + x, c);
    }
  }
  return Frame(h, w, std::move(out));
}

/// Counter-clockwise rotation about the frame center, same output size,
/// nearest-neighbour sampling, uncovered pixels black. Multiples of 90
/// degrees use exact trigonometric values, so four quarter turns of a square
/// frame reproduce it exactly.
inline Frame rotate(const Frame& in, double degrees) {
  double c;
  double s;
  const double turns = degrees / 90.0;
  if (std::abs(turns - std::round(turns)) < 1e-12) {
    const long q = ((std::lround(turns) % 4) + 4) % 4;
    constexpr std::array<double, 4> kCos{1, 0, -1, 0};
    constexpr std::array<double, 4> kSin{0, 1, 0, -1};
    c = kCos[static_cast<std::size_t>(q)];
    s = kSin[static_cast<std::size_t>(q)];
  } else {
    const double rad = degrees * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
  }
  const double cy = (static_cast<double>(in.height()) - 1.0) / 2.0;
  const double cx = (static_cast<double>(in.width()) - 1.0) / 2.0;
  Frame out = Frame::filled(in.height(), in.width(), 0);
  for (std::size_t y = 0; y < in.height(); ++y) {
    for (std::size_t x = 0; x < in.width(); ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      const double src_x = std::floor(cx + c * dx - s * dy + 0.5);
      const double src_y = std::floor(cy + s * dx + c * dy + 0.5);
      if (src_x < 0 || src_y < 0 || src_x >= static_cast<double>(in.width()) ||
          src_y >= static_cast<double>(in.height())) {
        continue;
      }
      for (std::size_t ch = 0; ch < Frame::kChannels; ++ch) {
        out.at(y, x, ch) = in.at(static_cast<std::size_t>(src_y), static_cast<std::size_t>(src_x), ch);
      }
    }
  }
  return out;
}

namespace detail {

// Photometric operators work on [0, 1] floats and re-quantize.
template <class Op>
Frame map_unit(const Frame& in, Op op) {
  Frame out(in);
  for (std::size_t y = 0; y < in.height(); ++y) {
    for (std::size_t x = 0; x < in.width(); ++x) {
      std::array<double, 3> px{in.at(y, x, 0) / 255.0, in.at(y, x, 1) / 255.0, in.at(y, x, 2) / 255.0};
      op(px, y, x);
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = quantize_sample(std::clamp(px[c], 0.0, 1.0) * 255.0);
    }
  }
  return out;
}

inline double gray(const std::array<double, 3>& px) { return 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]; }

}  // namespace detail

inline Frame adjust_brightness(const Frame& in, double factor) {
  return detail::map_unit(in, [factor](auto& px, std::size_t, std::size_t) {
    for (auto& v : px) v *= factor;
  });
}

/// Blend with the mean gray level of the frame.
inline Frame adjust_contrast(const Frame& in, double factor) {
  double mean = 0.0;
  for (std::size_t y = 0; y < in.height(); ++y) {
    for (std::size_t x = 0; x < in.width(); ++x) mean += in.luma(y, x) / 255.0;
  }
  mean /= static_cast<double>(in.height() * in.width());
  return detail::map_unit(in, [factor, mean](auto& px, std::size_t, std::size_t) {
    for (auto& v : px) v = factor * v + (1.0 - factor) * mean;
  });
}

/// Blend with the per-pixel gray level.
inline Frame adjust_saturation(const Frame& in, double factor) {
  return detail::map_unit(in, [factor](auto& px, std::size_t, std::size_t) {
    const double g = detail::gray(px);
    for (auto& v : px) v = factor * v + (1.0 - factor) * g;
  });
}

/// Blend with a 3x3 smoothed copy (kernel 1 1 1 / 1 5 1 / 1 1 1, over 13);
/// border pixels are left as they are.
inline Frame adjust_sharpness(const Frame& in, double factor) {
  if (in.height() < 3 || in.width() < 3) return in;
  return detail::map_unit(in, [&in, factor](auto& px, std::size_t y, std::size_t x) {
    if (y == 0 || x == 0 || y + 1 == in.height() || x + 1 == in.width()) return;
    for (std::size_t c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const double w = (dy == 0 && dx == 0) ? 5.0 : 1.0;
          acc += w * in.at(y + static_cast<std::size_t>(dy + 1) - 1, x + static_cast<std::size_t>(dx + 1) - 1, c);
        }
      }
      const double blurred = std::round(acc / 13.0) / 255.0;
      px[c] = factor * px[c] + (1.0 - factor) * blurred;
    }
  });
}

template <class Rng>
Frame add_gaussian_noise(const Frame& in, double sigma, Rng& rng) {
  return detail::map_unit(in, [&rng, sigma](auto& px, std::size_t, std::size_t) {
    for (auto& v : px) v += sigma * standard_normal(rng);
  });
}

// ---------------------------------------------------------------------------
// External encoder bridge

inline constexpr const char* kEncoderEnv = "FRAMEMARK_ENCODER";

inline std::optional<std::string> configured_encoder() {
  const char* path = std::getenv(kEncoderEnv);
  if (path == nullptr || *path == '\0') return std::nullopt;
  return std::string(path);
}

namespace detail {

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += "'\\''";
    else out += ch;
  }
  return out + "'";
}

}  // namespace detail

/// Runs `<encoder> <input_dir> <output_dir>`: the encoder must compress the
/// frame_%04d.png sequence in input_dir and write the decoded frames, same
/// count and size, to output_dir.
inline std::vector<Frame> run_external_encoder(const std::string& encoder, const std::vector<Frame>& clip) {
  std::string pattern = (std::filesystem::temp_directory_path() / "framemark-enc-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw Error("mpeg4: cannot create a temporary directory");
  const std::filesystem::path work(pattern);
  struct Cleanup {
    std::filesystem::path dir;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  } cleanup{work};
  write_frame_dir(work / "in", clip);
  std::filesystem::create_directories(work / "out");
  const std::string cmd = detail::shell_quote(encoder) + " " + detail::shell_quote((work / "in").string()) + " " +
                          detail::shell_quote((work / "out").string());
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw Error("mpeg4: encoder '" + encoder + "' failed with status " + std::to_string(rc));
  auto frames = read_frame_dir(work / "out");
  if (frames.size() != clip.size()) throw Error("mpeg4: encoder returned a different frame count");
  return frames;
}

// ---------------------------------------------------------------------------

enum class DistortionStatus { kApplied, kSkipped };

struct DistortionOutcome {
  DistortionStatus status = DistortionStatus::kApplied;
  std::string message;  // reason when skipped
  std::vector<Frame> frames;
};

inline DistortionOutcome distort(const std::vector<Frame>& clip, const DistortionSpec& spec) {
  DistortionOutcome out;
  out.frames.reserve(clip.size());
  switch (spec.kind) {
    case DistortionKind::kResize:
      if (!(spec.parameter > 0.0)) throw Error("resize: factor must be positive");
      for (const auto& f : clip) {
        out.frames.push_back(resize_bilinear(f, scaled_dim(f.height(), spec.parameter), scaled_dim(f.width(), spec.parameter)));
      }
      break;
    case DistortionKind::kJpeg:
      for (const auto& f : clip) out.frames.push_back(jpeg_roundtrip(f, static_cast<int>(std::lround(spec.parameter))));
      break;
    case DistortionKind::kCrop:
      if (!(spec.parameter > 0.0 && spec.parameter <= 1.0)) throw Error("crop: factor must lie in (0, 1]");
      for (const auto& f : clip) out.frames.push_back(center_crop(f, spec.parameter));
      break;
    case DistortionKind::kRotation:
      for (const auto& f : clip) out.frames.push_back(rotate(f, spec.parameter));
      break;
    case DistortionKind::kBrightness:
      for (const auto& f : clip) out.frames.push_back(adjust_brightness(f, spec.parameter));
      break;
    case DistortionKind::kContrast:
      for (const auto& f : clip) out.frames.push_back(adjust_contrast(f, spec.parameter));
      break;
    case DistortionKind::kSaturation:
      for (const auto& f : clip) out.frames.push_back(adjust_saturation(f, spec.parameter));
      break;
    case DistortionKind::kSharpness:
      for (const auto& f : clip) out.frames.push_back(adjust_sharpness(f, spec.parameter));
      break;
    case DistortionKind::kGaussianNoise:
      if (spec.parameter < 0.0) throw Error("gaussian_noise: sigma must be non-negative");
      for (std::size_t i = 0; i < clip.size(); ++i) {
        auto rng = substream(spec.seed, "gaussian-noise", {i});
        out.frames.push_back(add_gaussian_noise(clip[i], spec.parameter, rng));
      }
      break;
    case DistortionKind::kMpeg4: {
      const auto encoder = configured_encoder();
      if (!encoder) {
        out.status = DistortionStatus::kSkipped;
        out.message = std::string("no external encoder configured (set ") + kEncoderEnv + ")";
        return out;
      }
      out.frames = run_external_encoder(*encoder, clip);
      break;
    }
    default:
      throw Error("distort: unsupported distortion kind");
  }
  return out;
}

}  // namespace framemark
