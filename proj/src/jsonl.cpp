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

#include <fstream>
#include <istream>
#include <ostream>

#include "biocopy/error.hpp"
#include "json.hpp"

namespace biocopy {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw Error(ErrorCode::kMissingField,
                std::string("missing field \"") + field + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* field) {
  const json& value = require(obj, field);
  if (!value.is_string()) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("field \"") + field + "\" must be a string");
  }
  return value.get<std::string>();
}

std::size_t require_index(const json& obj, const char* field) {
  const json& value = require(obj, field);
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("field \"") + field +
                    "\" must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

TokenSeq tokenize_field(const json& obj, const char* field,
                        const TokenizeOptions& options) {
  const std::string text = require_string(obj, field);
  try {
    return tokenize(text, options);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("field \"") + field + "\" has no tokens");
  }
}

}  // namespace

std::filesystem::path manifest_path(const std::filesystem::path& data_path) {
  std::filesystem::path p = data_path;
  p += ".manifest.json";
  return p;
}

void write_manifest(const std::filesystem::path& data_path,
                    const TokenizeOptions& options) {
  std::ofstream out(manifest_path(data_path));
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + manifest_path(data_path).string());
  }
  json m = {{"tokenize_mode", std::string(to_string(options.mode))},
            {"lowercase", options.lowercase}};
  out << m.dump() << '\n';
}

std::optional<TokenizeOptions> read_manifest(
    const std::filesystem::path& data_path) {
  const auto path = manifest_path(data_path);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    json m = json::parse(in);
    TokenizeOptions options;
    options.mode = parse_tokenize_mode(require_string(m, "tokenize_mode"));
    const json& lc = require(m, "lowercase");
    if (!lc.is_boolean()) {
      throw Error(ErrorCode::kMalformedRecord, "\"lowercase\" must be a bool");
    }
    options.lowercase = lc.get<bool>();
    return options;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

Record parse_record(std::string_view line, const TokenizeOptions& options) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kMalformedRecord, "record must be a JSON object");
  }
  Record record;
  record.source = tokenize_field(obj, "source", options);
  record.target = tokenize_field(obj, "target", options);

  if (auto it = obj.find("tags"); it != obj.end()) {
    if (!it->is_array()) {
      throw Error(ErrorCode::kMalformedRecord, "\"tags\" must be an array");
    }
    std::vector<BioTag> tags;
    for (const json& t : *it) {
      if (!t.is_string()) {
        throw Error(ErrorCode::kMalformedRecord, "tag must be a string");
      }
      tags.push_back(parse_tag(t.get<std::string>()));
    }
    if (tags.size() != record.target.size()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "tags length " + std::to_string(tags.size()) +
                      " does not match target length " +
                      std::to_string(record.target.size()));
    }
    record.tags = std::move(tags);
  }

  if (auto it = obj.find("gold_spans"); it != obj.end()) {
    if (!it->is_array()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "\"gold_spans\" must be an array");
    }
    std::vector<GoldSpan> spans;
    for (const json& s : *it) {
      if (!s.is_object()) {
        throw Error(ErrorCode::kMalformedRecord, "gold span must be an object");
      }
      GoldSpan span{require_index(s, "src_start"), require_index(s, "src_end"),
                    require_index(s, "tgt_start"), require_index(s, "tgt_end")};
      const bool ok = span.src_start < span.src_end &&
                      span.src_end <= record.source.size() &&
                      span.tgt_start < span.tgt_end &&
                      span.tgt_end <= record.target.size() &&
                      span.src_end - span.src_start == span.length();
      if (!ok) {
        throw Error(ErrorCode::kMalformedRecord, "gold span out of range");
      }
      spans.push_back(span);
    }
    record.gold_spans = std::move(spans);
  }
  return record;
}

std::string format_record(const Record& record, TokenizeMode mode) {
  json obj = json::object();
  obj["source"] = detokenize(record.source, mode);
  obj["target"] = detokenize(record.target, mode);
  if (record.tags) {
    json tags = json::array();
    for (BioTag t : *record.tags) tags.push_back(std::string(to_string(t)));
    obj["tags"] = std::move(tags);
  }
  if (record.gold_spans) {
    json spans = json::array();
    for (const GoldSpan& s : *record.gold_spans) {
      spans.push_back({{"src_start", s.src_start},
                       {"src_end", s.src_end},
                       {"tgt_start", s.tgt_start},
                       {"tgt_end", s.tgt_end}});
    }
    obj["gold_spans"] = std::move(spans);
  }
  return obj.dump();
}

std::vector<Record> read_jsonl(std::istream& in,
                               const TokenizeOptions& options) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(line, options));
    } catch (const Error& e) {
      throw e.with_line(line_no);
    }
  }
  return records;
}

void write_jsonl(std::ostream& out, std::span<const Record> records,
                 TokenizeMode mode) {
  for (const Record& r : records) out << format_record(r, mode) << '\n';
}

std::vector<Record> read_jsonl(const std::filesystem::path& path,
                               const TokenizeOptions& fallback) {
  const TokenizeOptions options = read_manifest(path).value_or(fallback);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return read_jsonl(in, options);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_jsonl(const std::filesystem::path& path,
                 std::span<const Record> records,
                 const TokenizeOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_jsonl(out, records, options.mode);
  write_manifest(path, options);
}

}  // namespace biocopy
