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

#ifndef BIOCOPY_DECODER_HPP_
#define BIOCOPY_DECODER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "biocopy/corpus.hpp"
#include "biocopy/error.hpp"
#include "biocopy/mask_engine.hpp"
#include "biocopy/scorer.hpp"
#include "biocopy/types.hpp"
#include "json.hpp"

namespace biocopy {

struct DecodeConfig {
  std::size_t max_len = 256;
  // 1 selects greedy decoding.
  std::size_t beam_width = 1;
  // false is the ablation baseline: tags are predicted but never enforced.
  bool constrained = true;
  double length_penalty = 0.0;
  // Route UNK's mass to restricted source tokens missing from the vocabulary.
  bool copy_oov = true;

  void validate() const;
};

struct DecodeDiagnostics {
  std::uint64_t steps = 0;          // emitted tokens, EOS excluded
  std::uint64_t scorer_calls = 0;
  std::uint64_t tag_fallbacks = 0;  // argmax tag was invalid and got masked
  std::uint64_t zero_mass_fallbacks = 0;
  std::uint64_t restricted_steps = 0;
  std::uint64_t mask_size_total = 0;  // summed restricted support sizes
  std::uint64_t oov_copies = 0;

  DecodeDiagnostics& operator+=(const DecodeDiagnostics& other);
  friend bool operator==(const DecodeDiagnostics&, const DecodeDiagnostics&) = default;
};

struct DecodeResult {
  TokenSeq tokens;
  std::vector<BioTag> tags;
  // Sum of log p(tag) + log p(token) over steps (EOS included), divided by
  // max(1, |tokens|)^length_penalty.
  double score = 0.0;
  bool finished = false;  // stopped on EOS rather than max_len
  DecodeDiagnostics diagnostics;

  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

// Token distribution after masking. Entries past the vocabulary belong to
// `oov`, source surfaces that only exist through copying.
struct MaskedTokens {
  Eigen::VectorXd probs;
  std::vector<Token> oov;
  std::size_t support = 0;  // 0 when unrestricted
  bool zero_mass = false;

  const Token& surface(Eigen::Index i, const Vocabulary& vocab) const;
};

MaskedTokens mask_tokens(const Eigen::VectorXd& token_dist,
                         const AllowedSet& allowed, const Vocabulary& vocab,
                         bool copy_oov);

// Zeroes tags outside `valid` and renormalizes; uniform over `valid` when
// they carry no mass. Never reorders valid tags.
TagDistribution restrict_tags(const TagDistribution& dist, TagSet valid);

// Tag-first greedy decoding: argmax tag, then argmax token under that tag's
// mask, then advance. Ties go to the lowest index (B < I < O for tags).
DecodeResult greedy_decode(const Scorer& scorer, std::span<const Token> source,
                           const Vocabulary& vocab, const DecodeConfig& config);

// Best-first hypotheses, at most beam_width of them. Each hypothesis expands
// over all valid (tag, token) pairs scored jointly; ties are broken by token
// index, then tag order, then parent rank. Width 1 is greedy_decode.
std::vector<DecodeResult> beam_decode(const Scorer& scorer,
                                      std::span<const Token> source,
                                      const Vocabulary& vocab,
                                      const DecodeConfig& config);

// greedy_decode for width 1, otherwise the best beam hypothesis.
DecodeResult decode(const Scorer& scorer, std::span<const Token> source,
                    const Vocabulary& vocab, const DecodeConfig& config);

using ScorerFactory =
    std::function<std::unique_ptr<Scorer>(std::size_t index, const ExamplePair& pair)>;

struct DecodeFailure {
  std::size_t index = 0;
  std::optional<ErrorCode> code;
  std::string message;
};

struct CorpusDecode {
  std::vector<std::optional<DecodeResult>> results;  // input order
  std::vector<DecodeFailure> failures;
  DecodeDiagnostics totals;
};

// Failing examples are recorded, never fatal.
CorpusDecode decode_corpus(const ScorerFactory& factory,
                           std::span<const ExamplePair> pairs,
                           const Vocabulary& vocab, const DecodeConfig& config);

nlohmann::json to_json(const DecodeDiagnostics& diagnostics);
nlohmann::json to_json(const DecodeResult& result);
DecodeResult decode_result_from_json(const nlohmann::json& doc);

}  // namespace biocopy

#endif  // BIOCOPY_DECODER_HPP_
