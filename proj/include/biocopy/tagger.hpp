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

#ifndef BIOCOPY_TAGGER_HPP_
#define BIOCOPY_TAGGER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "biocopy/corpus.hpp"
#include "biocopy/error.hpp"
#include "biocopy/types.hpp"

namespace biocopy {

// (|a|+1) x (|b|+1) prefix LCS lengths; entry (i, j) covers a[0..i), b[0..j).
using LcsTable = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
LcsTable lcs_length_table(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySequence, "LCS of an empty sequence");
  }
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = static_cast<Eigen::Index>(b.size());
  LcsTable table = LcsTable::Zero(rows + 1, cols + 1);
  for (Eigen::Index i = 1; i <= rows; ++i) {
    for (Eigen::Index j = 1; j <= cols; ++j) {
      table(i, j) = a[static_cast<std::size_t>(i - 1)] ==
                            b[static_cast<std::size_t>(j - 1)]
                        ? table(i - 1, j - 1) + 1
                        : std::max(table(i - 1, j), table(i, j - 1));
    }
  }
  return table;
}

inline LcsTable lcs_length_table(std::span<const Token> source,
                                 std::span<const Token> target) {
  return lcs_length_table<Token>(source, target);
}

struct AlignedPair {
  std::size_t source_index = 0;
  std::size_t target_index = 0;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

// Strictly increasing in both coordinates.
using Alignment = std::vector<AlignedPair>;

// Backtracks from the bottom-right corner: a match is taken whenever the
// tokens agree on the diagonal; otherwise the source index is reduced when
// that keeps the LCS length, else the target index.
Alignment lcs_align(std::span<const Token> source, std::span<const Token> target);

// O for unaligned target positions; I when the previous target position is
// aligned to the immediately preceding source position; B otherwise.
std::vector<BioTag> bio_tag(std::span<const Token> source,
                            std::span<const Token> target);

struct TaggedExample {
  TokenSeq source;
  TokenSeq target;
  std::vector<BioTag> tags;

  friend bool operator==(const TaggedExample&, const TaggedExample&) = default;
};

// Throws Error(kMalformedRecord) unless tags match the target length, no I
// opens a sequence or follows O, and every copied token occurs in source.
void validate_tagged(const TaggedExample& example);

// Errors carry the offending example index.
std::vector<TaggedExample> tag_corpus(std::span<const ExamplePair> pairs);

}  // namespace biocopy

#endif  // BIOCOPY_TAGGER_HPP_
