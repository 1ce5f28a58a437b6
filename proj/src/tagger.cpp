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

#include "biocopy/tagger.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace biocopy {

Alignment lcs_align(std::span<const Token> source,
                    std::span<const Token> target) {
  const LcsTable table = lcs_length_table(source, target);
  Alignment pairs;
  pairs.reserve(static_cast<std::size_t>(
      table(table.rows() - 1, table.cols() - 1)));
  Eigen::Index i = table.rows() - 1;
  Eigen::Index j = table.cols() - 1;
  while (i > 0 && j > 0) {
    const auto si = static_cast<std::size_t>(i - 1);
    const auto tj = static_cast<std::size_t>(j - 1);
    if (source[si] == target[tj] && table(i, j) == table(i - 1, j - 1) + 1) {
      pairs.push_back({si, tj});
      --i;
      --j;
    } else if (table(i - 1, j) >= table(i, j - 1)) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<BioTag> bio_tag(std::span<const Token> source,
                            std::span<const Token> target) {
  const Alignment alignment = lcs_align(source, target);
  std::vector<std::optional<std::size_t>> aligned_src(target.size());
  for (const AlignedPair& p : alignment) aligned_src[p.target_index] = p.source_index;

  std::vector<BioTag> tags(target.size(), BioTag::O);
  for (std::size_t t = 0; t < target.size(); ++t) {
    if (!aligned_src[t]) continue;
    const bool continues = t > 0 && aligned_src[t - 1] &&
                           *aligned_src[t - 1] + 1 == *aligned_src[t];
    tags[t] = continues ? BioTag::I : BioTag::B;
  }
  return tags;
}

void validate_tagged(const TaggedExample& example) {
  if (example.tags.size() != example.target.size()) {
    throw Error(ErrorCode::kMalformedRecord,
                "tags length does not match target length");
  }
  std::set<std::string_view> source_tokens(example.source.begin(),
                                           example.source.end());
  for (std::size_t t = 0; t < example.tags.size(); ++t) {
    const BioTag tag = example.tags[t];
    if (tag == BioTag::I && (t == 0 || example.tags[t - 1] == BioTag::O)) {
      throw Error(ErrorCode::kMalformedRecord,
                  "tag I at position " + std::to_string(t) +
                      " does not continue a span");
    }
    if (tag != BioTag::O && !source_tokens.contains(example.target[t])) {
      throw Error(ErrorCode::kMalformedRecord,
                  "copied token '" + example.target[t] +
                      "' does not occur in source");
    }
  }
}

std::vector<TaggedExample> tag_corpus(std::span<const ExamplePair> pairs) {
  std::vector<TaggedExample> out;
  out.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    try {
      out.push_back({pairs[k].source, pairs[k].target,
                     bio_tag(pairs[k].source, pairs[k].target)});
    } catch (const Error& e) {
      throw e.with_index(k);
    }
  }
  return out;
}

}  // namespace biocopy
