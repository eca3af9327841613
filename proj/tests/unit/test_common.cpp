// Copyright 2026 The kepath Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/parallel.hpp"

using namespace kepath;

TEST_CASE("split helpers") {
  const auto lines = SplitLines("a\r\nb\n\nc");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "a");
  CHECK(lines[2].empty());
  CHECK(SplitLines("").empty());
  const auto f = SplitTabs("x\t\ty");
  REQUIRE(f.size() == 3);
  CHECK(f[1].empty());
  CHECK(Trim("  hi \t") == "hi");
  CHECK(IsSkippableLine("   "));
  CHECK(IsSkippableLine("# note"));
  CHECK_FALSE(IsSkippableLine("x # y"));
}

TEST_CASE("number parsing reports the line") {
  CHECK(ParseDouble(" 2.5 ", "v", 1) == 2.5);
  CHECK(ParseInt("-17", "v", 1) == -17);
  try {
    ParseDouble("abc", "latitude", 12);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("12") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseInt("1.5", "v", 1), Error);
}

TEST_CASE("FormatDouble round-trips") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(ParseDouble(FormatDouble(v), "v", 0) == v);
  }
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(100.0) == "100");
}

TEST_CASE("Fingerprint is stable and content sensitive") {
  CHECK(Fingerprint("") == 0xcbf29ce484222325ULL);  // FNV-1a offset basis
  CHECK(Fingerprint("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Fingerprint("ab") != Fingerprint("ba"));
}

TEST_CASE("WriteFile creates directories and replaces content") {
  const auto dir = std::filesystem::temp_directory_path() / "kepath_test_io" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  WriteFile(dir / "f.txt", "one");
  WriteFile(dir / "f.txt", "two");
  CHECK(ReadFile(dir / "f.txt") == "two");
  CHECK_THROWS_AS(ReadFile(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("ParallelFor covers every index once for any thread count") {
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    std::vector<int> hits(101, 0);
    ParallelFor(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  ParallelFor(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("ParallelFor propagates exceptions") {
  CHECK_THROWS_AS(ParallelFor(50, 4,
                              [](std::size_t i) {
                                if (i == 17) throw Error(ErrorCode::kInternal, "boom");
                              }),
                  Error);
}
