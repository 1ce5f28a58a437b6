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

// Brute-force reference implementations for tests. Nothing here may call
// into the code paths it is used to check.

#ifndef BIOCOPY_TESTS_ORACLES_HPP_
#define BIOCOPY_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biocopy/types.hpp"

namespace oracle {

using biocopy::Token;
using biocopy::TokenSeq;

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

inline bool is_subsequence(std::span<const Token> needle,
                           std::span<const Token> hay) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < hay.size() && j < needle.size(); ++i) {
    if (hay[i] == needle[j]) ++j;
  }
  return j == needle.size();
}

// Exhaustive over subsets of `a`; exponential, keep |a| <= ~16.
inline std::size_t lcs_length(std::span<const Token> a, std::span<const Token> b) {
  std::size_t best = 0;
  const std::uint32_t n = static_cast<std::uint32_t>(a.size());
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits <= best) continue;
    TokenSeq sub;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) sub.push_back(a[i]);
    }
    if (is_subsequence(sub, b)) best = bits;
  }
  return best;
}

// Every matching, strictly increasing pair list of maximum length.
inline std::vector<PairList> maximal_alignments(std::span<const Token> a,
                                                std::span<const Token> b) {
  std::vector<PairList> all;
  PairList current;
  std::size_t best = 0;
  auto dfs = [&](auto&& self, std::size_t i0, std::size_t j0) -> void {
    if (current.size() > best) {
      best = current.size();
      all.clear();
    }
    if (current.size() == best) all.push_back(current);
    for (std::size_t i = i0; i < a.size(); ++i) {
      for (std::size_t j = j0; j < b.size(); ++j) {
        if (a[i] != b[j]) continue;
        current.emplace_back(i, j);
        self(self, i + 1, j + 1);
        current.pop_back();
      }
    }
  };
  dfs(dfs, 0, 0);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

inline bool is_substring(std::span<const Token> hay, std::span<const Token> needle) {
  if (needle.empty()) return true;
  if (needle.size() > hay.size()) return false;
  for (std::size_t s = 0; s + needle.size() <= hay.size(); ++s) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(s))) {
      return true;
    }
  }
  return false;
}

// Start positions of every occurrence of `needle` in `hay`.
inline std::vector<std::size_t> occurrences(std::span<const Token> hay,
                                            std::span<const Token> needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > hay.size()) return out;
  for (std::size_t s = 0; s + needle.size() <= hay.size(); ++s) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(s))) {
      out.push_back(s);
    }
  }
  return out;
}

// Tokens w such that open_span + [w] is a window of the source.
inline std::set<Token> window_continuations(std::span<const Token> source,
                                            std::span<const Token> open_span) {
  std::set<Token> out;
  const std::size_t len = open_span.size();
  for (std::size_t s = 0; s + len + 1 <= source.size(); ++s) {
    if (std::equal(open_span.begin(), open_span.end(),
                   source.begin() + static_cast<std::ptrdiff_t>(s))) {
      out.insert(source[s + len]);
    }
  }
  return out;
}

// Maximal copied runs: a run opens at B (or an I not following a copied
// position) and continues over I.
inline std::vector<TokenSeq> copied_runs(std::span<const Token> tokens,
                                         std::span<const biocopy::BioTag> tags) {
  using biocopy::BioTag;
  std::vector<TokenSeq> runs;
  bool open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == BioTag::O) {
      open = false;
    } else if (tags[i] == BioTag::I && open) {
      runs.back().push_back(tokens[i]);
    } else {
      runs.push_back({tokens[i]});
      open = true;
    }
  }
  return runs;
}

inline TokenSeq random_tokens(std::mt19937_64& rng, std::size_t len,
                              std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
  TokenSeq out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(std::string(1, static_cast<char>('a' + pick(rng))));
  }
  return out;
}

}  // namespace oracle

#endif  // BIOCOPY_TESTS_ORACLES_HPP_
