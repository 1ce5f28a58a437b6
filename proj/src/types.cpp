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

#include "biocopy/types.hpp"

#include "biocopy/error.hpp"

namespace biocopy {

std::string_view to_string(BioTag tag) {
  switch (tag) {
    case BioTag::B: return "B";
    case BioTag::I: return "I";
    case BioTag::O: return "O";
  }
  return "?";
}

BioTag parse_tag(std::string_view text) {
  if (text == "B") return BioTag::B;
  if (text == "I") return BioTag::I;
  if (text == "O") return BioTag::O;
  throw Error(ErrorCode::kMalformedRecord,
              "invalid BIO tag '" + std::string(text) + "'");
}

std::string tags_to_string(std::span<const BioTag> tags) {
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i > 0) out += ' ';
    out += to_string(tags[i]);
  }
  return out;
}

std::vector<TagRun> tag_runs(std::span<const BioTag> tags) {
  std::vector<TagRun> runs;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == BioTag::O) continue;
    const bool continues = tags[i] == BioTag::I && !runs.empty() &&
                           runs.back().end == i;
    if (continues) {
      runs.back().end = i + 1;
    } else {
      runs.push_back({i, i + 1});
    }
  }
  return runs;
}

}  // namespace biocopy
