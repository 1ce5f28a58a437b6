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
#include "doctest.h"

using namespace biocopy;

TEST_CASE("tags parse and print") {
  CHECK(parse_tag("B") == BioTag::B);
  CHECK(parse_tag("I") == BioTag::I);
  CHECK(parse_tag("O") == BioTag::O);
  CHECK_THROWS_AS(parse_tag("X"), Error);
  const std::vector<BioTag> tags{BioTag::B, BioTag::I, BioTag::O};
  CHECK(tags_to_string(tags) == "B I O");
}

TEST_CASE("tag set") {
  TagSet s{BioTag::B, BioTag::O};
  CHECK(s.size() == 2);
  CHECK_FALSE(s.contains(BioTag::I));
  s.insert(BioTag::I);
  s.erase(BioTag::B);
  CHECK(s == TagSet{BioTag::I, BioTag::O});
  CHECK(TagSet{}.empty());
}

TEST_CASE("tag runs split on B and O") {
  using enum BioTag;
  CHECK(tag_runs(std::vector<BioTag>{B, I, I, O}) == std::vector<TagRun>{{0, 3}});
  CHECK(tag_runs(std::vector<BioTag>{O, O}).empty());
  CHECK(tag_runs(std::vector<BioTag>{B, B}) == std::vector<TagRun>{{0, 1}, {1, 2}});
  // A stray I opens its own run.
  CHECK(tag_runs(std::vector<BioTag>{I, O, I, I}) ==
        std::vector<TagRun>{{0, 1}, {2, 4}});
}
