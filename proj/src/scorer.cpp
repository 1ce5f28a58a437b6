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

#include "biocopy/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <utility>

#include "biocopy/error.hpp"
#include "biocopy/mask_engine.hpp"

namespace biocopy {
namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit_draw(std::uint64_t seed, std::uint64_t step) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(step));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

bool occurs_in(std::span<const Token> source, const Token& token) {
  return std::find(source.begin(), source.end(), token) != source.end();
}

TagDistribution one_hot_tag(BioTag tag, double noise) {
  TagDistribution d = TagDistribution::Constant(noise / 2.0);
  d(static_cast<Eigen::Index>(tag_index(tag))) = 1.0 - noise;
  return d;
}

}  // namespace

void check_step_scores(const StepScores& scores, std::size_t vocab_size) {
  detail::check_distribution(scores.token_dist, vocab_size, 1e-6);
  detail::check_distribution(scores.tag_dist, kNumTags, 1e-6);
}

UniformScorer::UniformScorer(std::size_t vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size == 0) {
    throw Error(ErrorCode::kInvalidConfig, "vocabulary size must be positive");
  }
}

StepScores UniformScorer::score_step(const ScorerContext&) const {
  const auto n = static_cast<Eigen::Index>(vocab_size_);
  return {Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)),
          TagDistribution::Constant(1.0 / 3.0)};
}

NgramScorer::NgramScorer(Vocabulary vocab, double add_k)
    : vocab_(std::move(vocab)),
      add_k_(add_k),
      transitions_(vocab_.size()),
      row_totals_(vocab_.size(), 0),
      unigrams_(vocab_.size(), 0) {
  if (!(add_k > 0.0) || !std::isfinite(add_k)) {
    throw Error(ErrorCode::kInvalidConfig, "add_k must be a positive real");
  }
}

void NgramScorer::add_transition(std::size_t prev, std::size_t cur,
                                 std::uint64_t n) {
  transitions_[prev][cur] += n;
  row_totals_[prev] += n;
  unigrams_[cur] += n;
  unigram_total_ += n;
}

NgramScorer NgramScorer::train(std::span<const TaggedExample> corpus,
                               Vocabulary vocab, double add_k) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot train on an empty corpus");
  }
  NgramScorer scorer(std::move(vocab), add_k);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const TaggedExample& ex = corpus[k];
    if (ex.tags.size() != ex.target.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "tags length does not match target length")
          .with_index(k);
    }
    std::size_t prev = Vocabulary::kBos;
    std::size_t prev_tag = kStartContext;
    std::size_t feature = 0;
    for (std::size_t t = 0; t < ex.target.size(); ++t) {
      const std::size_t cur = scorer.vocab_.index_or_unk(ex.target[t]);
      scorer.add_transition(prev, cur, 1);
      ++scorer.tag_counts_[prev_tag][feature][tag_index(ex.tags[t])];
      prev = cur;
      prev_tag = tag_index(ex.tags[t]);
      feature = occurs_in(ex.source, ex.target[t]) ? 1 : 0;
    }
    scorer.add_transition(prev, Vocabulary::kEos, 1);
    ++scorer.tag_counts_[prev_tag][feature][tag_index(BioTag::O)];
  }
  return scorer;
}

StepScores NgramScorer::score_step(const ScorerContext& context) const {
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  const double kv = add_k_ * static_cast<double>(v);

  std::size_t prev = Vocabulary::kBos;
  std::size_t prev_tag = kStartContext;
  std::size_t feature = 0;
  if (!context.emitted_tokens.empty()) {
    const Token& last = context.emitted_tokens.back();
    prev = vocab_.index_or_unk(last);
    feature = occurs_in(context.source, last) ? 1 : 0;
  }
  if (!context.emitted_tags.empty()) prev_tag = tag_index(context.emitted_tags.back());

  StepScores out;
  out.token_dist.resize(v);
  if (row_totals_[prev] > 0) {
    const double denom = static_cast<double>(row_totals_[prev]) + kv;
    out.token_dist.setConstant(add_k_ / denom);
    for (const auto& [cur, n] : transitions_[prev]) {
      out.token_dist(static_cast<Eigen::Index>(cur)) =
          (static_cast<double>(n) + add_k_) / denom;
    }
  } else {
    const double denom = static_cast<double>(unigram_total_) + kv;
    for (Eigen::Index i = 0; i < v; ++i) {
      out.token_dist(i) =
          (static_cast<double>(unigrams_[static_cast<std::size_t>(i)]) + add_k_) /
          denom;
    }
  }

  const auto& row = tag_counts_[prev_tag][feature];
  std::uint64_t row_total = row[0] + row[1] + row[2];
  std::array<std::uint64_t, kNumTags> counts = row;
  if (row_total == 0) {
    counts = {0, 0, 0};
    for (const auto& by_feature : tag_counts_) {
      for (const auto& r : by_feature) {
        for (std::size_t z = 0; z < kNumTags; ++z) counts[z] += r[z];
      }
    }
    row_total = counts[0] + counts[1] + counts[2];
  }
  const double tag_denom = static_cast<double>(row_total) + 3.0 * add_k_;
  for (std::size_t z = 0; z < kNumTags; ++z) {
    out.tag_dist(static_cast<Eigen::Index>(z)) =
        (static_cast<double>(counts[z]) + add_k_) / tag_denom;
  }
  return out;
}

json NgramScorer::to_json() const {
  json token_counts = json::array();
  for (std::size_t prev = 0; prev < transitions_.size(); ++prev) {
    std::vector<std::pair<std::size_t, std::uint64_t>> row(
        transitions_[prev].begin(), transitions_[prev].end());
    std::sort(row.begin(), row.end());
    for (const auto& [cur, n] : row) token_counts.push_back({prev, cur, n});
  }
  json tag_counts = json::array();
  for (const auto& by_feature : tag_counts_) {
    json f = json::array();
    for (const auto& r : by_feature) f.push_back({r[0], r[1], r[2]});
    tag_counts.push_back(std::move(f));
  }
  std::vector<Token> content(vocab_.entries().begin() + Vocabulary::kNumReserved,
                             vocab_.entries().end());
  return {{"version", kFormatVersion},
          {"add_k", add_k_},
          {"vocab", content},
          {"token_counts", std::move(token_counts)},
          {"tag_counts", std::move(tag_counts)}};
}

NgramScorer NgramScorer::from_json(const json& doc) {
  try {
    const int version = doc.at("version").get<int>();
    if (version != kFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "scorer format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kFormatVersion) + ")");
    }
    NgramScorer scorer(Vocabulary(doc.at("vocab").get<std::vector<Token>>()),
                       doc.at("add_k").get<double>());
    const std::size_t v = scorer.vocab_.size();
    for (const json& entry : doc.at("token_counts")) {
      const auto prev = entry.at(0).get<std::size_t>();
      const auto cur = entry.at(1).get<std::size_t>();
      if (prev >= v || cur >= v) {
        throw Error(ErrorCode::kMalformedRecord, "token count index out of range");
      }
      scorer.add_transition(prev, cur, entry.at(2).get<std::uint64_t>());
    }
    const json& tags = doc.at("tag_counts");
    if (tags.size() != kTagContexts) {
      throw Error(ErrorCode::kMalformedRecord, "tag_counts has wrong shape");
    }
    for (std::size_t c = 0; c < kTagContexts; ++c) {
      if (tags[c].size() != 2) {
        throw Error(ErrorCode::kMalformedRecord, "tag_counts has wrong shape");
      }
      for (std::size_t f = 0; f < 2; ++f) {
        const auto row = tags[c][f].get<std::vector<std::uint64_t>>();
        if (row.size() != kNumTags) {
          throw Error(ErrorCode::kMalformedRecord, "tag_counts has wrong shape");
        }
        std::copy(row.begin(), row.end(), scorer.tag_counts_[c][f].begin());
      }
    }
    return scorer;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("invalid scorer document: ") + e.what());
  }
}

void NgramScorer::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json().dump() << '\n';
}

NgramScorer NgramScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": " + e.what());
  }
  try {
    return from_json(doc);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

OracleScorer::OracleScorer(const TaggedExample& example,
                           const Vocabulary& vocab, double noise,
                           std::uint64_t seed, OracleConfusion confusion)
    : gold_tags_(example.tags),
      vocab_size_(vocab.size()),
      noise_(noise),
      seed_(seed),
      confusion_rate_(confusion.rate) {
  if (!(noise >= 0.0 && noise < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "noise must lie in [0, 1)");
  }
  if (!(confusion.rate >= 0.0 && confusion.rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "confusion rate must lie in [0, 1]");
  }
  if (example.tags.size() != example.target.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "tags length does not match target length");
  }
  gold_tokens_.reserve(example.target.size());
  for (const Token& t : example.target) gold_tokens_.push_back(vocab.index_or_unk(t));
  if (confusion.rate > 0.0) {
    if (auto idx = vocab.find(confusion.distractor)) distractor_ = *idx;
  }
}

bool OracleScorer::confused_at(std::size_t step) const {
  if (!distractor_ || step >= gold_tokens_.size()) return false;
  if (gold_tags_[step] == BioTag::O || gold_tokens_[step] == *distractor_) {
    return false;
  }
  return unit_draw(seed_, step) < confusion_rate_;
}

StepScores OracleScorer::score_step(const ScorerContext& context) const {
  const std::size_t t = context.step();
  const auto v = static_cast<Eigen::Index>(vocab_size_);
  StepScores out;
  if (t >= gold_tokens_.size()) {
    out.token_dist = Eigen::VectorXd::Zero(v);
    out.token_dist(static_cast<Eigen::Index>(Vocabulary::kEos)) = 1.0;
    out.tag_dist = one_hot_tag(BioTag::O, 0.0);
    return out;
  }
  const auto gold = static_cast<Eigen::Index>(gold_tokens_[t]);
  if (confused_at(t)) {
    const auto wrong = static_cast<Eigen::Index>(*distractor_);
    out.token_dist = Eigen::VectorXd::Constant(
        v, v > 2 ? noise_ / 2.0 / static_cast<double>(v - 2) : 0.0);
    out.token_dist(wrong) = 1.0 - noise_;
    out.token_dist(gold) = v > 2 ? noise_ / 2.0 : noise_;
  } else {
    out.token_dist = Eigen::VectorXd::Constant(
        v, v > 1 ? noise_ / static_cast<double>(v - 1) : 0.0);
    out.token_dist(gold) = v > 1 ? 1.0 - noise_ : 1.0;
  }
  out.tag_dist = one_hot_tag(gold_tags_[t], noise_);
  return out;
}

std::unique_ptr<Scorer> make_oracle_scorer(const TaggedExample& example,
                                           const Vocabulary& vocab,
                                           double noise, std::uint64_t seed,
                                           OracleConfusion confusion) {
  return std::make_unique<OracleScorer>(example, vocab, noise, seed,
                                        std::move(confusion));
}

LossReport joint_loss(std::span<const std::vector<StepScores>> predictions,
                      std::span<const TaggedExample> gold,
                      const Vocabulary& vocab) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "predictions cover " + std::to_string(predictions.size()) +
                    " examples, gold has " + std::to_string(gold.size()));
  }
  LossReport report;
  auto nll = [&report](double p) {
    if (p < kProbabilityFloor) {
      ++report.floor_hits;
      p = kProbabilityFloor;
    }
    return -std::log(p);
  };
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const TaggedExample& ex = gold[k];
    if (predictions[k].size() != ex.target.size() ||
        ex.tags.size() != ex.target.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  std::to_string(predictions[k].size()) +
                      " predicted steps for a target of length " +
                      std::to_string(ex.target.size()))
          .with_index(k);
    }
    for (std::size_t t = 0; t < ex.target.size(); ++t) {
      const StepScores& s = predictions[k][t];
      if (static_cast<std::size_t>(s.token_dist.size()) != vocab.size()) {
        throw Error(ErrorCode::kLengthMismatch,
                    "token distribution size does not match vocabulary")
            .with_index(k);
      }
      const auto gold_token =
          static_cast<Eigen::Index>(vocab.index_or_unk(ex.target[t]));
      const auto gold_tag = static_cast<Eigen::Index>(tag_index(ex.tags[t]));
      report.token_term += nll(s.token_dist(gold_token));
      report.tag_term += nll(s.tag_dist(gold_tag));
    }
    report.token_count += ex.target.size();
  }
  if (report.token_count == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "loss over zero steps");
  }
  report.total = (report.token_term + report.tag_term) /
                 static_cast<double>(report.token_count);
  return report;
}

std::vector<StepScores> teacher_forced_scores(const Scorer& scorer,
                                              const TaggedExample& example) {
  std::vector<StepScores> out;
  out.reserve(example.target.size());
  const std::span<const Token> target(example.target);
  const std::span<const BioTag> tags(example.tags);
  for (std::size_t t = 0; t < example.target.size(); ++t) {
    out.push_back(scorer.score_step({example.source, target.first(t), tags.first(t)}));
  }
  return out;
}

}  // namespace biocopy
