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

#include "biocopy/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>
#include <utility>

#include "biocopy/error.hpp"

namespace biocopy {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

void fold_case(std::string& s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
}

// Length of the UTF-8 sequence starting with `lead`. Invalid lead bytes are
// treated as single-byte characters.
std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

int draw(std::mt19937_64& rng, IntRange range) {
  return std::uniform_int_distribution<int>(range.min, range.max)(rng);
}

void check_range(const IntRange& r, std::string_view name) {
  if (r.min < 1 || r.min > r.max) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(name) + " range must satisfy 1 <= min <= max");
  }
}

}  // namespace

std::string_view to_string(TokenizeMode mode) {
  return mode == TokenizeMode::kChar ? "char" : "whitespace";
}

TokenizeMode parse_tokenize_mode(std::string_view text) {
  if (text == "whitespace") return TokenizeMode::kWhitespace;
  if (text == "char") return TokenizeMode::kChar;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown tokenize mode '" + std::string(text) + "'");
}

TokenSeq tokenize(std::string_view text, TokenizeMode mode, bool lowercase) {
  TokenSeq tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (mode == TokenizeMode::kWhitespace) {
      while (j < text.size() && !is_space(text[j])) ++j;
    } else {
      j = std::min(text.size(),
                   i + utf8_length(static_cast<unsigned char>(text[i])));
    }
    tokens.emplace_back(text.substr(i, j - i));
    if (lowercase) fold_case(tokens.back());
    i = j;
  }
  if (tokens.empty()) {
    throw Error(ErrorCode::kEmptyInput, "text yields no tokens");
  }
  return tokens;
}

TokenSeq tokenize(std::string_view text, const TokenizeOptions& options) {
  return tokenize(text, options.mode, options.lowercase);
}

std::string detokenize(std::span<const Token> tokens, TokenizeMode mode) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && mode == TokenizeMode::kWhitespace) out += ' ';
    out += tokens[i];
  }
  return out;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<Token>{}) {}

Vocabulary::Vocabulary(std::vector<Token> content) {
  entries_.reserve(kNumReserved + content.size());
  entries_.emplace_back(kPadSurface);
  entries_.emplace_back(kUnkSurface);
  entries_.emplace_back(kBosSurface);
  entries_.emplace_back(kEosSurface);
  for (std::size_t i = 0; i < kNumReserved; ++i) index_.emplace(entries_[i], i);
  for (Token& token : content) {
    if (token.empty()) {
      throw Error(ErrorCode::kMalformedRecord, "empty vocabulary entry");
    }
    if (!index_.emplace(token, entries_.size()).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  "duplicate vocabulary entry '" + token + "'");
    }
    entries_.push_back(std::move(token));
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::index_or_unk(std::string_view token) const {
  return find(token).value_or(kUnk);
}

bool Vocabulary::is_reserved_surface(std::string_view token) {
  return token == kPadSurface || token == kUnkSurface ||
         token == kBosSurface || token == kEosSurface;
}

Vocabulary build_vocab(std::span<const ExamplePair> corpus,
                       std::size_t min_freq) {
  std::unordered_map<Token, std::size_t> counts;
  for (const ExamplePair& pair : corpus) {
    for (const Token& t : pair.source) ++counts[t];
    for (const Token& t : pair.target) ++counts[t];
  }
  std::vector<std::pair<Token, std::size_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= min_freq && !Vocabulary::is_reserved_surface(token)) {
      kept.emplace_back(token, count);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<Token> content;
  content.reserve(kept.size());
  for (auto& entry : kept) content.push_back(std::move(entry.first));
  return Vocabulary(std::move(content));
}

void SyntheticConfig::validate() const {
  if (vocab_size < 2) {
    throw Error(ErrorCode::kInvalidConfig, "vocab_size must be at least 2");
  }
  if (num_examples < 1) {
    throw Error(ErrorCode::kInvalidConfig, "num_examples must be positive");
  }
  check_range(source_len, "source_len");
  check_range(spans_per_target, "spans_per_target");
  check_range(span_len, "span_len");
  check_range(filler_len, "filler_len");
  if (span_len.max > source_len.min) {
    throw Error(ErrorCode::kInvalidConfig,
                "span_len max must not exceed source_len min");
  }
  if (spans_per_target.min * span_len.min > source_len.min) {
    throw Error(ErrorCode::kConfigInfeasible,
                "the minimum span total exceeds source_len min");
  }
  if (distractor_rate < 0.0 || distractor_rate > 1.0) {
    throw Error(ErrorCode::kInvalidConfig,
                "distractor_rate must lie in [0, 1]");
  }
  if (copy_vocab_size() < source_len.max) {
    throw Error(ErrorCode::kConfigInfeasible,
                "copy sub-vocabulary (" + std::to_string(copy_vocab_size()) +
                    " tokens) cannot fill a source of length " +
                    std::to_string(source_len.max) + " without repeats");
  }
}

std::vector<SyntheticExample> generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::bernoulli_distribution use_distractor(config.distractor_rate);

  std::vector<Token> copy_vocab;
  for (int k = 0; k < config.copy_vocab_size(); ++k) {
    copy_vocab.push_back("c" + std::to_string(k));
  }
  std::vector<Token> filler_vocab;
  for (int k = 0; k < config.filler_vocab_size(); ++k) {
    filler_vocab.push_back("g" + std::to_string(k));
  }
  std::uniform_int_distribution<std::size_t> pick_filler(
      0, filler_vocab.size() - 1);

  auto append_filler = [&](TokenSeq& target, int count) {
    for (int k = 0; k < count; ++k) {
      if (config.distractor && use_distractor(rng)) {
        target.emplace_back(kDistractorToken);
      } else {
        target.push_back(filler_vocab[pick_filler(rng)]);
      }
    }
  };

  std::vector<SyntheticExample> out;
  out.reserve(static_cast<std::size_t>(config.num_examples));
  std::vector<std::size_t> order(copy_vocab.size());
  for (int e = 0; e < config.num_examples; ++e) {
    const auto n = static_cast<std::size_t>(draw(rng, config.source_len));

    // Partial Fisher-Yates: the first n entries are a uniform sample without
    // replacement.
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
      std::swap(order[k], order[pick(rng)]);
    }
    SyntheticExample ex;
    ex.pair.source.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      ex.pair.source.push_back(copy_vocab[order[k]]);
    }
    if (config.distractor &&
        std::find(ex.pair.source.begin(), ex.pair.source.end(),
                  kDistractorToken) == ex.pair.source.end()) {
      std::uniform_int_distribution<std::size_t> pos(0, n - 1);
      ex.pair.source[pos(rng)] = Token(kDistractorToken);
    }

    std::vector<std::size_t> lens(
        static_cast<std::size_t>(draw(rng, config.spans_per_target)));
    std::size_t total = 0;
    for (auto& len : lens) {
      len = static_cast<std::size_t>(draw(rng, config.span_len));
      total += len;
    }
    // Trim the longest span, then drop spans, until the draw fits.
    while (total > n) {
      auto longest = std::max_element(lens.begin(), lens.end());
      if (*longest > static_cast<std::size_t>(config.span_len.min)) {
        --*longest;
        --total;
      } else {
        total -= lens.back();
        lens.pop_back();
      }
    }
    const std::size_t k = lens.size();

    // Split the n - total free source positions into k + 1 gaps.
    std::uniform_int_distribution<std::size_t> cut(0, n - total);
    std::vector<std::size_t> cuts(k);
    for (auto& c : cuts) c = cut(rng);
    std::sort(cuts.begin(), cuts.end());

    std::size_t src = 0;
    std::size_t prev_cut = 0;
    const IntRange edge_filler{0, config.filler_len.max};
    for (std::size_t s = 0; s < k; ++s) {
      src += cuts[s] - prev_cut;
      prev_cut = cuts[s];
      const int filler = s == 0
          ? std::uniform_int_distribution<int>(edge_filler.min, edge_filler.max)(rng)
          : draw(rng, config.filler_len);
      append_filler(ex.pair.target, filler);
      GoldSpan span;
      span.src_start = src;
      span.src_end = src + lens[s];
      span.tgt_start = ex.pair.target.size();
      for (std::size_t p = span.src_start; p < span.src_end; ++p) {
        ex.pair.target.push_back(ex.pair.source[p]);
      }
      span.tgt_end = ex.pair.target.size();
      ex.gold_spans.push_back(span);
      src = span.src_end;
    }
    append_filler(ex.pair.target, std::uniform_int_distribution<int>(
                                      edge_filler.min, edge_filler.max)(rng));
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<BioTag> tags_from_spans(std::size_t target_len,
                                    std::span<const GoldSpan> spans) {
  std::vector<BioTag> tags(target_len, BioTag::O);
  for (const GoldSpan& span : spans) {
    for (std::size_t t = span.tgt_start; t < span.tgt_end && t < target_len;
         ++t) {
      tags[t] = t == span.tgt_start ? BioTag::B : BioTag::I;
    }
  }
  return tags;
}

}  // namespace biocopy
