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

#ifndef BIOCOPY_SCORER_HPP_
#define BIOCOPY_SCORER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "biocopy/corpus.hpp"
#include "biocopy/tagger.hpp"
#include "biocopy/types.hpp"
#include "json.hpp"

namespace biocopy {

using TagDistribution = Eigen::Matrix<double, 3, 1>;

// One decode step: p(token | prefix, source) over the vocabulary and
// p(tag | prefix, source) over {B, I, O}, predicted independently.
struct StepScores {
  Eigen::VectorXd token_dist;
  TagDistribution tag_dist;
};

// Throws Error(kInvalidDistribution) unless both vectors are non-negative,
// sum to 1 within 1e-6 and the token vector has `vocab_size` entries.
void check_step_scores(const StepScores& scores, std::size_t vocab_size);

struct ScorerContext {
  std::span<const Token> source;
  std::span<const Token> emitted_tokens;
  std::span<const BioTag> emitted_tags;

  std::size_t step() const { return emitted_tokens.size(); }
};

// Model abstraction. Implementations must be deterministic and return
// normalized distributions.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual StepScores score_step(const ScorerContext& context) const = 0;
  virtual std::size_t vocab_size() const = 0;
};

// Uniform over the vocabulary and over tags: the untrained baseline.
class UniformScorer final : public Scorer {
 public:
  explicit UniformScorer(std::size_t vocab_size);
  StepScores score_step(const ScorerContext& context) const override;
  std::size_t vocab_size() const override { return vocab_size_; }

 private:
  std::size_t vocab_size_;
};

// Count-based reference model.
//
// Tokens: add-k bigram p(y_t | y_{t-1}) with BOS as the first predecessor
// and EOS as the final successor. Tags: add-k p(z_t | z_{t-1}, f_t) where f_t
// says whether y_{t-1} occurs in the source. A context never seen in training
// falls back to the add-k marginal.
class NgramScorer final : public Scorer {
 public:
  static constexpr int kFormatVersion = 1;

  // Throws Error(kEmptyCorpus) or Error(kInvalidConfig) for add_k <= 0.
  static NgramScorer train(std::span<const TaggedExample> corpus,
                           Vocabulary vocab, double add_k);

  StepScores score_step(const ScorerContext& context) const override;
  std::size_t vocab_size() const override { return vocab_.size(); }
  const Vocabulary& vocab() const { return vocab_; }
  double add_k() const { return add_k_; }

  // {"version": 1, "add_k": k, "vocab": [...], "token_counts": [[prev, cur,
  // n], ...], "tag_counts": [4][2][3]}. Loading a different version throws
  // Error(kVersionMismatch).
  nlohmann::json to_json() const;
  static NgramScorer from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static NgramScorer load(const std::filesystem::path& path);

 private:
  // Previous tag slot: B, I, O, or start of sequence.
  static constexpr std::size_t kTagContexts = 4;
  static constexpr std::size_t kStartContext = 3;
  using TagCounts = std::array<std::array<std::array<std::uint64_t, kNumTags>, 2>,
                               kTagContexts>;

  NgramScorer(Vocabulary vocab, double add_k);
  void add_transition(std::size_t prev, std::size_t cur, std::uint64_t n);

  Vocabulary vocab_;
  double add_k_;
  std::vector<std::unordered_map<std::size_t, std::uint64_t>> transitions_;
  std::vector<std::uint64_t> row_totals_;
  std::vector<std::uint64_t> unigrams_;
  std::uint64_t unigram_total_ = 0;
  TagCounts tag_counts_{};
};

// Optional systematic confusion for the oracle: at a copy step (gold tag B or
// I) chosen with probability `rate`, the distractor takes the top mass
// (1 - noise), gold keeps noise / 2 and the remaining noise / 2 is spread
// uniformly. Steps whose gold token is the distractor are never confused.
struct OracleConfusion {
  Token distractor;
  double rate = 0.0;
};

// Scores a fixed reference: at step t the gold token and tag receive
// 1 - noise and the rest is uniform over the other entries. Past the end of
// the reference it returns one-hot EOS with tag O. Gold tokens outside the
// vocabulary score as UNK.
class OracleScorer final : public Scorer {
 public:
  OracleScorer(const TaggedExample& example, const Vocabulary& vocab,
               double noise, std::uint64_t seed, OracleConfusion confusion = {});

  StepScores score_step(const ScorerContext& context) const override;
  std::size_t vocab_size() const override { return vocab_size_; }
  bool confused_at(std::size_t step) const;

 private:
  std::vector<std::size_t> gold_tokens_;
  std::vector<BioTag> gold_tags_;
  std::size_t vocab_size_;
  double noise_;
  std::uint64_t seed_;
  std::optional<std::size_t> distractor_;
  double confusion_rate_;
};

std::unique_ptr<Scorer> make_oracle_scorer(const TaggedExample& example,
                                           const Vocabulary& vocab,
                                           double noise, std::uint64_t seed,
                                           OracleConfusion confusion = {});

struct LossReport {
  double total = 0.0;
  double token_term = 0.0;
  double tag_term = 0.0;
  std::size_t token_count = 0;
  // Gold probabilities that were clamped to the 1e-12 floor.
  std::size_t floor_hits = 0;
};

inline constexpr double kProbabilityFloor = 1e-12;

// Mean over all steps in the batch of -log p(gold token) - log p(gold tag).
// Throws Error(kLengthMismatch) when prediction and gold lengths disagree.
LossReport joint_loss(std::span<const std::vector<StepScores>> predictions,
                      std::span<const TaggedExample> gold,
                      const Vocabulary& vocab);

// Scores every gold step with the gold prefix as context.
std::vector<StepScores> teacher_forced_scores(const Scorer& scorer,
                                              const TaggedExample& example);

}  // namespace biocopy

#endif  // BIOCOPY_SCORER_HPP_
