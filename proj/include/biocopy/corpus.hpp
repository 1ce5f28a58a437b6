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

#ifndef BIOCOPY_CORPUS_HPP_
#define BIOCOPY_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biocopy/types.hpp"

namespace biocopy {

enum class TokenizeMode { kWhitespace, kChar };

std::string_view to_string(TokenizeMode mode);
// Throws Error(kInvalidConfig) for anything but "whitespace" or "char".
TokenizeMode parse_tokenize_mode(std::string_view text);

struct TokenizeOptions {
  TokenizeMode mode = TokenizeMode::kWhitespace;
  bool lowercase = false;

  friend bool operator==(const TokenizeOptions&, const TokenizeOptions&) = default;
};

// Whitespace mode splits on runs of ASCII whitespace. Char mode yields one
// token per UTF-8 code point and drops whitespace. `lowercase` folds ASCII
// letters only. Throws Error(kEmptyInput) when no token results.
TokenSeq tokenize(std::string_view text, TokenizeMode mode,
                  bool lowercase = false);
TokenSeq tokenize(std::string_view text, const TokenizeOptions& options);

// Inverse of tokenize for the given mode: single spaces in whitespace mode,
// plain concatenation in char mode.
std::string detokenize(std::span<const Token> tokens, TokenizeMode mode);

// Token <-> index bijection with PAD, UNK, BOS, EOS fixed at indices 0-3.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::size_t kBos = 2;
  static constexpr std::size_t kEos = 3;
  static constexpr std::size_t kNumReserved = 4;

  static constexpr std::string_view kPadSurface = "<pad>";
  static constexpr std::string_view kUnkSurface = "<unk>";
  static constexpr std::string_view kBosSurface = "<s>";
  static constexpr std::string_view kEosSurface = "</s>";

  Vocabulary();
  // `content` follows the reserved symbols in the given order. Throws
  // Error(kMalformedRecord) on duplicates or reserved surfaces.
  explicit Vocabulary(std::vector<Token> content);

  std::size_t size() const { return entries_.size(); }
  const std::vector<Token>& entries() const { return entries_; }
  const Token& surface(std::size_t index) const { return entries_.at(index); }
  std::optional<std::size_t> find(std::string_view token) const;
  std::size_t index_or_unk(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  static constexpr bool is_reserved(std::size_t index) {
    return index < kNumReserved;
  }
  static bool is_reserved_surface(std::string_view token);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Token> entries_;
  std::map<Token, std::size_t, std::less<>> index_;
};

struct ExamplePair {
  TokenSeq source;
  TokenSeq target;

  friend bool operator==(const ExamplePair&, const ExamplePair&) = default;
};

// Reserved symbols first, then every token with frequency >= min_freq by
// descending frequency, ties broken lexicographically. Source and target
// occurrences both count. Surfaces equal to a reserved symbol are skipped.
Vocabulary build_vocab(std::span<const ExamplePair> corpus,
                       std::size_t min_freq);

struct IntRange {
  int min = 1;
  int max = 1;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

// Synthetic copy task. The content vocabulary of `vocab_size` tokens is split
// into a copy half ("c<k>", the only tokens sources are built from) and a
// generation-only half ("g<k>", filler). Sources never repeat a token, so
// every copied span has exactly one source occurrence.
//
// With `distractor` set, token "c0" is placed in every source and also
// replaces each filler token with probability `distractor_rate`; gold tags
// then come from the annotations, not from LCS.
struct SyntheticConfig {
  int vocab_size = 60;
  int num_examples = 100;
  IntRange source_len{12, 24};
  IntRange spans_per_target{1, 3};
  IntRange span_len{2, 5};
  IntRange filler_len{1, 3};
  std::uint64_t seed = 0;
  bool distractor = false;
  double distractor_rate = 0.3;

  // Throws Error(kInvalidConfig) when a range or count is malformed, and
  // Error(kConfigInfeasible) when the copy half cannot fill a source or the
  // smallest span draw does not fit the shortest source.
  void validate() const;
  int copy_vocab_size() const { return vocab_size - vocab_size / 2; }
  int filler_vocab_size() const { return vocab_size / 2; }
};

inline constexpr std::string_view kDistractorToken = "c0";

// One copied span, end-exclusive intervals in source and target.
struct GoldSpan {
  std::size_t src_start = 0;
  std::size_t src_end = 0;
  std::size_t tgt_start = 0;
  std::size_t tgt_end = 0;

  std::size_t length() const { return tgt_end - tgt_start; }
  friend bool operator==(const GoldSpan&, const GoldSpan&) = default;
};

struct SyntheticExample {
  ExamplePair pair;
  std::vector<GoldSpan> gold_spans;

  friend bool operator==(const SyntheticExample&, const SyntheticExample&) = default;
};

// Deterministic given config.seed. Span draws too long for their source are
// shortened, longest first, then dropped, down to the configured minimums.
std::vector<SyntheticExample> generate_synthetic(const SyntheticConfig& config);

// B at each span start, I over the rest of the span, O elsewhere.
std::vector<BioTag> tags_from_spans(std::size_t target_len,
                                    std::span<const GoldSpan> spans);

}  // namespace biocopy

#endif  // BIOCOPY_CORPUS_HPP_
