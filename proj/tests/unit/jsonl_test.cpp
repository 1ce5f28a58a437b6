// Copyright 2026 The BioCopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "biocopy/jsonl.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "biocopy/error.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace biocopy;
using testing_support::code_of;
using testing_support::error_of;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "biocopy_jsonl_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("JSONL round trip is the identity on valid records") {
  std::mt19937_64 rng(5);
  std::vector<Record> records;
  for (int k = 0; k < 100; ++k) {
    Record r;
    r.source = oracle::random_tokens(rng, 1 + k % 7, 6);
    r.target = oracle::random_tokens(rng, 1 + k % 5, 6);
    if (k % 2 == 0) {
      std::vector<BioTag> tags;
      for (std::size_t t = 0; t < r.target.size(); ++t) tags.push_back(kAllTags[(k + t) % 3]);
      r.tags = tags;
    }
    if (k % 3 == 0) {
      r.gold_spans = std::vector<GoldSpan>{{0, 1, 0, 1}};
    }
    records.push_back(std::move(r));
  }
  const fs::path path = temp_file("roundtrip.jsonl");
  write_jsonl(path, records);
  CHECK(fs::exists(manifest_path(path)));
  CHECK(read_jsonl(path) == records);
}

TEST_CASE("char-mode manifest round trip") {
  std::vector<Record> records{{{"\xE6\xB3\x95", "a"}, {"a", "b"}, std::nullopt, std::nullopt}};
  const fs::path path = temp_file("char.jsonl");
  write_jsonl(path, records, {TokenizeMode::kChar, false});
  const auto manifest = read_manifest(path);
  REQUIRE(manifest);
  CHECK(manifest->mode == TokenizeMode::kChar);
  // The manifest wins over the caller's fallback.
  CHECK(read_jsonl(path, {TokenizeMode::kWhitespace, false}) == records);
}

TEST_CASE("schema violations name the line") {
  const std::string text =
      "{\"source\": \"a b\", \"target\": \"a\"}\n"
      "{\"source\": \"a b\"}\n";
  std::istringstream in(text);
  const auto e = error_of([&] { read_jsonl(in, TokenizeOptions{}); });
  REQUIRE(e.has_value());
  CHECK(e->code() == ErrorCode::kMissingField);
  CHECK(e->line() == 2);
  CHECK(std::string(e->what()).find("target") != std::string::npos);
}

TEST_CASE("tags must match the tokenized target") {
  std::istringstream in("{\"source\": \"a b\", \"target\": \"a b\", \"tags\": [\"B\"]}\n");
  const auto e = error_of([&] { read_jsonl(in, TokenizeOptions{}); });
  REQUIRE(e.has_value());
  CHECK(e->code() == ErrorCode::kMalformedRecord);
  CHECK(e->line() == 1);

  // The same tag count is fine in char mode, where "ab" is two tokens.
  std::istringstream chars("{\"source\": \"ab\", \"target\": \"ab\", \"tags\": [\"B\", \"I\"]}\n");
  CHECK(read_jsonl(chars, {TokenizeMode::kChar, false}).size() == 1);
}

TEST_CASE("malformed lines") {
  auto code = [](const std::string& line) {
    std::istringstream in(line);
    return code_of([&] { read_jsonl(in, TokenizeOptions{}); });
  };
  CHECK(code("not json") == ErrorCode::kMalformedRecord);
  CHECK(code("[1, 2]") == ErrorCode::kMalformedRecord);
  CHECK(code("{\"source\": 3, \"target\": \"a\"}") == ErrorCode::kMalformedRecord);
  CHECK(code("{\"source\": \"  \", \"target\": \"a\"}") == ErrorCode::kMalformedRecord);
  CHECK(code("{\"source\": \"a\", \"target\": \"a\", \"tags\": [\"Q\"]}") ==
        ErrorCode::kMalformedRecord);
  CHECK(code("{\"source\": \"a\", \"target\": \"a\", \"gold_spans\": [{\"src_start\": 0}]}") ==
        ErrorCode::kMissingField);
  CHECK(code("{\"source\": \"a\", \"target\": \"a\", \"gold_spans\": "
             "[{\"src_start\": 0, \"src_end\": 2, \"tgt_start\": 0, \"tgt_end\": 2}]}") ==
        ErrorCode::kMalformedRecord);
}

TEST_CASE("lowercase is applied on read") {
  std::istringstream in("{\"source\": \"SpaceX Rocket\", \"target\": \"SPACEX\"}\n");
  const auto records = read_jsonl(in, {TokenizeMode::kWhitespace, true});
  CHECK(records.at(0).source == TokenSeq{"spacex", "rocket"});
  CHECK(records.at(0).target == TokenSeq{"spacex"});
}

TEST_CASE("missing file") {
  CHECK(code_of([] { read_jsonl(fs::path("/nonexistent/x.jsonl")); }) ==
        ErrorCode::kIo);
}
