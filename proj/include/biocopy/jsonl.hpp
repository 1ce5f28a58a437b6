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

#ifndef BIOCOPY_JSONL_HPP_
#define BIOCOPY_JSONL_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biocopy/corpus.hpp"
#include "biocopy/types.hpp"

namespace biocopy {

// One dataset line. `tags` and `gold_spans` are present for tagged and
// synthetic records respectively.
struct Record {
  TokenSeq source;
  TokenSeq target;
  std::optional<std::vector<BioTag>> tags;
  std::optional<std::vector<GoldSpan>> gold_spans;

  ExamplePair pair() const { return {source, target}; }
  friend bool operator==(const Record&, const Record&) = default;
};

// Sidecar next to every dataset file: "<file>.manifest.json" holding
// {"tokenize_mode": "whitespace"|"char", "lowercase": bool}.
std::filesystem::path manifest_path(const std::filesystem::path& data_path);
void write_manifest(const std::filesystem::path& data_path,
                    const TokenizeOptions& options);
std::optional<TokenizeOptions> read_manifest(
    const std::filesystem::path& data_path);

// Parses one line. Throws Error(kMissingField) or Error(kMalformedRecord).
// Line numbers are attached by the stream readers.
Record parse_record(std::string_view line, const TokenizeOptions& options);
std::string format_record(const Record& record, TokenizeMode mode);

std::vector<Record> read_jsonl(std::istream& in, const TokenizeOptions& options);
void write_jsonl(std::ostream& out, std::span<const Record> records,
                 TokenizeMode mode);

// File variants. Reading prefers the sidecar manifest over `fallback`;
// writing always emits the manifest. Blank lines are skipped.
std::vector<Record> read_jsonl(const std::filesystem::path& path,
                               const TokenizeOptions& fallback = {});
void write_jsonl(const std::filesystem::path& path,
                 std::span<const Record> records,
                 const TokenizeOptions& options = {});

}  // namespace biocopy

#endif  // BIOCOPY_JSONL_HPP_
