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

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "framemark.hpp"

namespace framemark::cli {

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::uint64_t file_digest(const std::string& path) { return fnv1a64(read_text_file(path)); }

/// Digest over the frame files of a directory, in frame order.
inline std::uint64_t frame_dir_digest(const std::string& dir) {
  std::string listing;
  for (std::size_t i = 0;; ++i) {
    const auto path = std::filesystem::path(dir) / frame_filename(i);
    if (!std::filesystem::exists(path)) break;
    listing += frame_filename(i) + ":" + hex64(file_digest(path.string())) + "\n";
  }
  return fnv1a64(listing);
}

/// Canonical output envelope. Wall-clock time goes to stderr only, so
/// reruns with the same arguments produce the same bytes.
class RunReport {
 public:
  RunReport(std::string command, std::vector<std::string> argv, std::uint64_t seed)
      : command_(std::move(command)), argv_(std::move(argv)), seed_(seed), start_(std::chrono::steady_clock::now()) {}

  void set_manifest(const Manifest& m) { manifest_digest_ = manifest_digest(m); }
  void add_input(const std::string& role, const std::string& path, bool directory = false) {
    inputs_[role] = Json{{"path", path}, {"digest", hex64(directory ? frame_dir_digest(path) : file_digest(path))}};
  }
  Json& result() { return result_; }

  Json to_json() const {
    Json j;
    j["tool"] = "framemark";
    j["command"] = command_;
    j["argv"] = argv_;
    j["seed"] = seed_;
    if (manifest_digest_) j["manifest_digest"] = hex64(*manifest_digest_);
    j["inputs"] = inputs_.empty() ? Json::object() : inputs_;
    j["result"] = result_;
    return j;
  }

  void log_duration() const {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    std::fprintf(stderr, "framemark %s: %.3f s\n", command_.c_str(), dt.count());
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::uint64_t seed_;
  std::optional<std::uint64_t> manifest_digest_;
  Json inputs_;
  Json result_ = Json::object();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace framemark::cli
