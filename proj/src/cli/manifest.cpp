// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>

#include <openssl/evp.h>

#include "bibee/errors.hpp"

namespace bibee
{

std::string sha256_hex(std::string_view data)
{
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
  {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; i++)
  {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ParseError("cannot open '" + path.string() + "' for hashing");
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::add_input(const std::filesystem::path &path)
{
  input_digests.emplace_back(path.string(), sha256_file(path));
}

ordered_json RunManifest::to_json() const
{
  ordered_json j;
  j["command"] = command;
  j["parameters"] = parameters;
  auto inputs = ordered_json::array();
  for (const auto &[path, digest] : input_digests)
  {
    inputs.push_back({{"path", path}, {"sha256", digest}});
  }
  j["inputs"] = inputs;
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp.empty() ? utc_timestamp() : timestamp;
  return j;
}

}  // namespace bibee
