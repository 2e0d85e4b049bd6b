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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgas::cli {

/// Error in a config file; carries the offending line number (0 when not line-specific).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Every parameter any subcommand understands, with defaults.
struct RunParameters {
  int N = 10;
  std::string scan_N;  // "a:b", empty when unused
  int L = 200;
  std::vector<double> gamma{1.3, 10.0, 100.0};
  int samples = 4096;
  double a = 0.05;
  double p0 = 0.15707963267948966;  // pi / 20
  std::uint64_t seed = 42;
  std::string statistics = "fermion";
  std::string out = "qgas_out";
};

/// Keys accepted in config files; identical to the long flag names.
const std::vector<std::string>& config_keys();

/// `key = value` lines, `#` comments. Unknown keys, malformed lines and duplicate keys with
/// conflicting values raise ConfigError naming the line.
std::map<std::string, std::string> load_config(const std::filesystem::path& path);
std::map<std::string, std::string> parse_config(const std::string& text);

/// Writes `value` into the field named `key`. Throws ConfigError on a bad value.
void assign(RunParameters& params, const std::string& key, const std::string& value, int line = 0);

/// Parses "a:b" with 1 <= a <= b.
std::pair<int, int> parse_range(const std::string& text);

std::string sha256_hex(const std::filesystem::path& file);

}  // namespace qgas::cli
