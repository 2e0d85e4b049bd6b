/*
 * Copyright 2026 The qgas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace qgas::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& key, int line) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("line " + std::to_string(line) + ": bad value '" + text + "' for " + key, line);
  return value;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"N", "scan-N", "L", "gamma", "samples", "a",
                                             "p0", "seed", "statistics", "out"};
  return keys;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> values;
  std::map<std::string, int> seen_at;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + body + "'", line);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty key or value", line);
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'", line);
    if (auto it = values.find(key); it != values.end() && it->second != value)
      throw ConfigError("line " + std::to_string(line) + ": '" + key + "' conflicts with line " +
                            std::to_string(seen_at[key]),
                        line);
    values[key] = value;
    seen_at.emplace(key, line);
  }
  return values;
}

std::map<std::string, std::string> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void assign(RunParameters& p, const std::string& key, const std::string& value, int line) {
  if (key == "N") {
    p.N = parse_number<int>(value, key, line);
  } else if (key == "scan-N") {
    parse_range(value);
    p.scan_N = value;
  } else if (key == "L") {
    p.L = parse_number<int>(value, key, line);
  } else if (key == "gamma") {
    // Comma-separated list in config files.
    p.gamma.clear();
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) p.gamma.push_back(parse_number<double>(trim(item), key, line));
  } else if (key == "samples") {
    p.samples = parse_number<int>(value, key, line);
  } else if (key == "a") {
    p.a = parse_number<double>(value, key, line);
  } else if (key == "p0") {
    p.p0 = parse_number<double>(value, key, line);
  } else if (key == "seed") {
    p.seed = parse_number<std::uint64_t>(value, key, line);
  } else if (key == "statistics") {
    if (value != "fermion" && value != "boson")
      throw ConfigError("line " + std::to_string(line) + ": statistics must be fermion or boson", line);
    p.statistics = value;
  } else if (key == "out") {
    p.out = value;
  } else {
    throw ConfigError("unknown key '" + key + "'", line);
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("range must look like a:b, got '" + text + "'", 0);
  const int a = parse_number<int>(text.substr(0, colon), "range", 0);
  const int b = parse_number<int>(text.substr(colon + 1), "range", 0);
  if (a < 1 || b < a) throw ConfigError("range " + text + " must satisfy 1 <= a <= b", 0);
  return {a, b};
}

std::string sha256_hex(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 14> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace qgas::cli
