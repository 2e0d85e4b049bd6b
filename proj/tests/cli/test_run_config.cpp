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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "run_config.hpp"

using namespace qgas::cli;

namespace {

RunParameters apply(const std::string& text) {
  RunParameters p;
  for (const auto& [key, value] : parse_config(text)) assign(p, key, value);
  return p;
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("empty config keeps defaults") {
  const RunParameters p = apply("");
  const RunParameters d;
  CHECK(p.N == d.N);
  CHECK(p.L == d.L);
  CHECK(p.samples == d.samples);
  CHECK(p.seed == 42);
  CHECK(p.gamma == d.gamma);
  CHECK(apply("# only a comment\n\n").N == d.N);
}

TEST_CASE("values and comments") {
  const RunParameters p = apply("N = 100  # particles\ngamma = 1.3, 10,100\nstatistics=boson\nscan-N = 5:50\n");
  CHECK(p.N == 100);
  CHECK(p.gamma == std::vector<double>{1.3, 10.0, 100.0});
  CHECK(p.statistics == "boson");
  CHECK(parse_range(p.scan_N) == std::pair<int, int>{5, 50});
}

TEST_CASE("malformed line names its number") {
  CHECK(error_line("N = 3\nthis line has no equals sign\n") == 2);
  CHECK(error_line("\n\n = 4\n") == 3);
  try {
    parse_config("N = 3\nbroken\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("unknown keys and conflicting duplicates are rejected") {
  CHECK(error_line("N = 3\nwidth = 4\n") == 2);
  CHECK(error_line("N = 3\nL = 5\nN = 4\n") == 3);
  CHECK(error_line("N = 3\nN = 3\n") == -1);
}

TEST_CASE("bad values") {
  RunParameters p;
  CHECK_THROWS_AS(assign(p, "N", "ten", 1), ConfigError);
  CHECK_THROWS_AS(assign(p, "statistics", "anyon", 1), ConfigError);
  CHECK_THROWS_AS(parse_range("50:5"), ConfigError);
  CHECK_THROWS_AS(parse_range("7"), ConfigError);
}

TEST_CASE("sha256 of a known string") {
  const auto path = std::filesystem::temp_directory_path() / "qgas_sha_test.txt";
  std::ofstream(path, std::ios::binary) << "abc";
  CHECK(sha256_hex(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(path);
}
