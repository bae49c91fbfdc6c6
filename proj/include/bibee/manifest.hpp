// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_MANIFEST_HPP
#define BIBEE_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bibee/report_io.hpp"

namespace bibee
{

inline constexpr const char *kToolVersion = "0.1.0";

// Provenance record written next to every CLI output.
struct RunManifest
{
  std::string command;
  ordered_json parameters = ordered_json::object();
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, sha256 hex
  std::string tool_version = kToolVersion;
  std::string timestamp;  // UTC, ISO 8601

  void add_input(const std::filesystem::path &path);
  ordered_json to_json() const;
};

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path &path);
std::string sha256_hex(std::string_view data);

std::string utc_timestamp();

}  // namespace bibee

#endif  // BIBEE_MANIFEST_HPP
