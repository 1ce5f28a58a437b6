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

#ifndef BIOCOPY_TYPES_HPP_
#define BIOCOPY_TYPES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biocopy {

using Token = std::string;
using TokenSeq = std::vector<Token>;

// Per-position copy label. The numeric values double as indices into tag
// distributions and define the tie-break order B < I < O.
enum class BioTag : std::uint8_t { B = 0, I = 1, O = 2 };

inline constexpr std::size_t kNumTags = 3;
inline constexpr std::array<BioTag, kNumTags> kAllTags{BioTag::B, BioTag::I,
                                                       BioTag::O};

constexpr std::size_t tag_index(BioTag tag) {
  return static_cast<std::size_t>(tag);
}

std::string_view to_string(BioTag tag);

// Accepts "B", "I" or "O"; throws Error(kMalformedRecord) otherwise.
BioTag parse_tag(std::string_view text);

std::string tags_to_string(std::span<const BioTag> tags);

// Small value set over {B, I, O}.
class TagSet {
 public:
  constexpr TagSet() = default;
  constexpr TagSet(std::initializer_list<BioTag> tags) {
    for (BioTag t : tags) insert(t);
  }

  constexpr void insert(BioTag tag) { bits_ |= bit(tag); }
  constexpr void erase(BioTag tag) { bits_ &= static_cast<std::uint8_t>(~bit(tag)); }
  constexpr bool contains(BioTag tag) const { return (bits_ & bit(tag)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(contains(BioTag::B)) +
           static_cast<std::size_t>(contains(BioTag::I)) +
           static_cast<std::size_t>(contains(BioTag::O));
  }

  friend constexpr bool operator==(TagSet, TagSet) = default;

 private:
  static constexpr std::uint8_t bit(BioTag tag) {
    return static_cast<std::uint8_t>(1U << tag_index(tag));
  }
  std::uint8_t bits_ = 0;
};

// A maximal copied run in a tag sequence: target positions [start, end).
// A run opens at B, or at an I that does not follow a copied position, and
// extends over the I tags that follow.
struct TagRun {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const TagRun&, const TagRun&) = default;
};

std::vector<TagRun> tag_runs(std::span<const BioTag> tags);

}  // namespace biocopy

#endif  // BIOCOPY_TYPES_HPP_
