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

#include <cstdio>
#include <csetjmp>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "framemark/error.hpp"
#include "framemark/frame.hpp"

namespace framemark {

inline Frame read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw Error("read_png: " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> samples(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, samples.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error("read_png: " + path.string() + ": " + msg);
  }
  return Frame(image.height, image.width, std::move(samples));
}

inline void write_png(const std::filesystem::path& path, const Frame& frame) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width());
  image.height = static_cast<png_uint_32>(frame.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, frame.samples().data(), 0, nullptr)) {
    throw Error("write_png: " + path.string() + ": " + image.message);
  }
}

inline std::string frame_filename(std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%04zu.png", index);
  return name;
}

/// Reads frame_0000.png, frame_0001.png, ... from `dir`. Indices must be
/// contiguous from zero.
inline std::vector<Frame> read_frame_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("read_frame_dir: not a directory: " + dir.string());
  std::map<std::size_t, std::filesystem::path> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    unsigned long idx = 0;
    char tail[8] = {0};
    if (name.size() == 14 && std::sscanf(name.c_str(), "frame_%4lu.%3s", &idx, tail) == 2 &&
        std::strcmp(tail, "png") == 0) {
      found[idx] = entry.path();
    }
  }
  if (found.empty()) throw Error("read_frame_dir: no frame_%04d.png files in " + dir.string());
  std::vector<Frame> frames;
  std::size_t expect = 0;
  for (const auto& [idx, path] : found) {
    if (idx != expect) throw Error("read_frame_dir: missing " + frame_filename(expect) + " in " + dir.string());
    frames.push_back(read_png(path));
    ++expect;
  }
  return frames;
}

inline void write_frame_dir(const std::filesystem::path& dir, const std::vector<Frame>& frames) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) write_png(dir / frame_filename(i), frames[i]);
}

namespace detail {

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// libjpeg reports errors by longjmp; nothing with a destructor may live in
// these frames between setjmp and the library calls.
inline bool jpeg_compress_rgb(const std::uint8_t* rgb, std::size_t height, std::size_t width, int quality,
                              unsigned char** out, unsigned long* out_size, char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::strcpy(message, err.message);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(rgb + static_cast<std::size_t>(cinfo.next_scanline) * width * 3);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

inline bool jpeg_decompress_rgb(const unsigned char* data, unsigned long size, std::uint8_t* rgb,
                                std::size_t height, std::size_t width, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::strcpy(message, err.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, size);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  if (cinfo.output_width != width || cinfo.output_height != height || cinfo.output_components != 3) {
    std::strcpy(message, "unexpected decoded geometry");
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace detail

/// Encodes at the given quality (libjpeg defaults, 4:2:0 chroma) and decodes
/// back.
inline Frame jpeg_roundtrip(const Frame& frame, int quality) {
  if (quality < 1 || quality > 100) throw Error("jpeg_roundtrip: quality must lie in [1, 100]");
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  char message[JMSG_LENGTH_MAX] = {0};
  if (!detail::jpeg_compress_rgb(frame.samples().data(), frame.height(), frame.width(), quality, &buffer, &size,
                                 message)) {
    std::free(buffer);
    throw Error(std::string("jpeg_roundtrip: encode failed: ") + message);
  }
  std::vector<std::uint8_t> rgb(frame.samples().size());
  const bool ok = detail::jpeg_decompress_rgb(buffer, size, rgb.data(), frame.height(), frame.width(), message);
  std::free(buffer);
  if (!ok) throw Error(std::string("jpeg_roundtrip: decode failed: ") + message);
  return Frame(frame.height(), frame.width(), std::move(rgb));
}

}  // namespace framemark
