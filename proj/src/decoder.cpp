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

#include "biocopy/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

namespace biocopy {
namespace {

using nlohmann::json;

template <typename Vector>
Eigen::Index first_argmax(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

double log_or_neg_inf(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

double normalized(double logp, std::size_t len, double length_penalty) {
  if (length_penalty == 0.0) return logp;
  return logp / std::pow(static_cast<double>(std::max<std::size_t>(1, len)),
                         length_penalty);
}

struct StepTags {
  TagDistribution dist;
  TagSet candidates;
};

// Tag distribution the decoder acts on, plus the tags it may emit.
StepTags step_tags(const StepScores& scores, const DecodeState& state,
                   const SourceIndex& index, const DecodeConfig& config,
                   DecodeDiagnostics& diag) {
  if (!config.constrained) {
    return {scores.tag_dist, TagSet{BioTag::B, BioTag::I, BioTag::O}};
  }
  const TagSet valid = valid_tags(state, index);
  const auto raw = static_cast<std::size_t>(first_argmax(scores.tag_dist));
  if (!valid.contains(kAllTags[raw])) ++diag.tag_fallbacks;
  return {restrict_tags(scores.tag_dist, valid), valid};
}

MaskedTokens step_tokens(const StepScores& scores, const DecodeState& state,
                         BioTag tag, const SourceIndex& index,
                         const Vocabulary& vocab, const DecodeConfig& config,
                         DecodeDiagnostics& diag) {
  if (!config.constrained) {
    return {scores.token_dist, {}, 0, false};
  }
  MaskedTokens masked = mask_tokens(
      scores.token_dist, allowed_tokens(state, tag, index), vocab, config.copy_oov);
  if (masked.support > 0) {
    ++diag.restricted_steps;
    diag.mask_size_total += masked.support;
  }
  if (masked.zero_mass) ++diag.zero_mass_fallbacks;
  return masked;
}

void push_step(DecodeState& state, BioTag tag, const Token& token,
               const SourceIndex& index, const DecodeConfig& config) {
  if (config.constrained) {
    advance_in_place(state, tag, token, index);
  } else {
    state.emitted_tokens.push_back(token);
    state.emitted_tags.push_back(tag);
  }
}

ScorerContext context_of(std::span<const Token> source, const DecodeState& s) {
  return {source, s.emitted_tokens, s.emitted_tags};
}

StepScores checked_scores(const Scorer& scorer, const ScorerContext& ctx,
                          const Vocabulary& vocab) {
  StepScores scores = scorer.score_step(ctx);
  check_step_scores(scores, vocab.size());
  return scores;
}

}  // namespace

void DecodeConfig::validate() const {
  if (max_len < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_len must be at least 1");
  }
  if (beam_width < 1) {
    throw Error(ErrorCode::kInvalidConfig, "beam_width must be at least 1");
  }
  if (!(length_penalty >= 0.0) || !std::isfinite(length_penalty)) {
    throw Error(ErrorCode::kInvalidConfig, "length_penalty must be >= 0");
  }
}

DecodeDiagnostics& DecodeDiagnostics::operator+=(const DecodeDiagnostics& o) {
  steps += o.steps;
  scorer_calls += o.scorer_calls;
  tag_fallbacks += o.tag_fallbacks;
  zero_mass_fallbacks += o.zero_mass_fallbacks;
  restricted_steps += o.restricted_steps;
  mask_size_total += o.mask_size_total;
  oov_copies += o.oov_copies;
  return *this;
}

const Token& MaskedTokens::surface(Eigen::Index i, const Vocabulary& vocab) const {
  const auto v = static_cast<Eigen::Index>(vocab.size());
  return i < v ? vocab.surface(static_cast<std::size_t>(i))
               : oov[static_cast<std::size_t>(i - v)];
}

MaskedTokens mask_tokens(const Eigen::VectorXd& token_dist,
                         const AllowedSet& allowed, const Vocabulary& vocab,
                         bool copy_oov) {
  MaskedTokens out;
  if (!allowed.restricted()) {
    out.probs = apply_mask(token_dist, allowed, vocab);
    return out;
  }
  const std::vector<Eigen::Index> support = allowed_indices(allowed, vocab);
  if (copy_oov) out.oov = out_of_vocab(allowed, vocab);
  out.support = support.size() + out.oov.size();

  double mass = 0.0;
  for (Eigen::Index idx : support) mass += token_dist(idx);
  if (out.oov.empty()) {
    out.zero_mass = mass <= 0.0;
    out.probs = apply_mask(token_dist, allowed, vocab);
    return out;
  }

  detail::check_distribution(token_dist, vocab.size(), 1e-6);
  const auto v = static_cast<Eigen::Index>(vocab.size());
  const auto n_oov = static_cast<Eigen::Index>(out.oov.size());
  const double per_oov =
      token_dist(static_cast<Eigen::Index>(Vocabulary::kUnk)) /
      static_cast<double>(n_oov);
  mass += per_oov * static_cast<double>(n_oov);
  out.probs = Eigen::VectorXd::Zero(v + n_oov);
  if (mass > 0.0) {
    for (Eigen::Index idx : support) out.probs(idx) = token_dist(idx) / mass;
    out.probs.tail(n_oov).setConstant(per_oov / mass);
  } else {
    out.zero_mass = true;
    const double uniform = 1.0 / static_cast<double>(out.support);
    for (Eigen::Index idx : support) out.probs(idx) = uniform;
    out.probs.tail(n_oov).setConstant(uniform);
  }
  return out;
}

TagDistribution restrict_tags(const TagDistribution& dist, TagSet valid) {
  TagDistribution out = TagDistribution::Zero();
  double mass = 0.0;
  for (BioTag t : kAllTags) {
    if (valid.contains(t)) mass += dist(static_cast<Eigen::Index>(tag_index(t)));
  }
  for (BioTag t : kAllTags) {
    if (!valid.contains(t)) continue;
    const auto i = static_cast<Eigen::Index>(tag_index(t));
    out(i) = mass > 0.0 ? dist(i) / mass : 1.0 / static_cast<double>(valid.size());
  }
  return out;
}

DecodeResult greedy_decode(const Scorer& scorer, std::span<const Token> source,
                           const Vocabulary& vocab, const DecodeConfig& config) {
  config.validate();
  const SourceIndex index(TokenSeq(source.begin(), source.end()));
  DecodeState state = init_state();
  DecodeResult result;
  double logp = 0.0;
  const auto v = static_cast<Eigen::Index>(vocab.size());

  while (state.emitted_tokens.size() < config.max_len) {
    const StepScores scores =
        checked_scores(scorer, context_of(source, state), vocab);
    ++result.diagnostics.scorer_calls;
    const StepTags tags = step_tags(scores, state, index, config, result.diagnostics);
    const BioTag tag = kAllTags[static_cast<std::size_t>(first_argmax(tags.dist))];
    const MaskedTokens masked =
        step_tokens(scores, state, tag, index, vocab, config, result.diagnostics);
    const Eigen::Index choice = first_argmax(masked.probs);
    logp += log_or_neg_inf(tags.dist(static_cast<Eigen::Index>(tag_index(tag)))) +
            log_or_neg_inf(masked.probs(choice));
    if (choice == static_cast<Eigen::Index>(Vocabulary::kEos)) {
      result.finished = true;
      break;
    }
    if (choice >= v) ++result.diagnostics.oov_copies;
    push_step(state, tag, masked.surface(choice, vocab), index, config);
    ++result.diagnostics.steps;
  }
  result.tokens = std::move(state.emitted_tokens);
  result.tags = std::move(state.emitted_tags);
  result.score = normalized(logp, result.tokens.size(), config.length_penalty);
  return result;
}

std::vector<DecodeResult> beam_decode(const Scorer& scorer,
                                      std::span<const Token> source,
                                      const Vocabulary& vocab,
                                      const DecodeConfig& config) {
  config.validate();
  if (config.beam_width == 1) return {greedy_decode(scorer, source, vocab, config)};

  const SourceIndex index(TokenSeq(source.begin(), source.end()));
  const auto v = static_cast<Eigen::Index>(vocab.size());

  struct Hypothesis {
    DecodeState state;
    double logp = 0.0;
    DecodeDiagnostics diag;
    bool finished = false;
  };
  struct Candidate {
    double logp;
    Eigen::Index token;
    BioTag tag;
    std::size_t parent;
    Token surface;
    DecodeDiagnostics diag;
  };

  std::vector<Hypothesis> live(1);
  std::vector<Hypothesis> done;
  for (std::size_t step = 0; step < config.max_len && !live.empty(); ++step) {
    const std::size_t capacity = config.beam_width - done.size();
    std::vector<Candidate> candidates;
    for (std::size_t h = 0; h < live.size(); ++h) {
      const Hypothesis& hyp = live[h];
      DecodeDiagnostics diag = hyp.diag;
      const StepScores scores =
          checked_scores(scorer, context_of(source, hyp.state), vocab);
      ++diag.scorer_calls;
      const StepTags tags = step_tags(scores, hyp.state, index, config, diag);
      for (BioTag tag : kAllTags) {
        if (!tags.candidates.contains(tag)) continue;
        const double p_tag = tags.dist(static_cast<Eigen::Index>(tag_index(tag)));
        if (p_tag <= 0.0) continue;
        DecodeDiagnostics tag_diag = diag;
        const MaskedTokens masked =
            step_tokens(scores, hyp.state, tag, index, vocab, config, tag_diag);
        std::vector<Eigen::Index> order;
        for (Eigen::Index i = 0; i < masked.probs.size(); ++i) {
          if (masked.probs(i) > 0.0) order.push_back(i);
        }
        const std::size_t keep = std::min(order.size(), capacity);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                          order.end(), [&](Eigen::Index a, Eigen::Index b) {
                            if (masked.probs(a) != masked.probs(b)) {
                              return masked.probs(a) > masked.probs(b);
                            }
                            return a < b;
                          });
        for (std::size_t k = 0; k < keep; ++k) {
          const Eigen::Index tok = order[k];
          candidates.push_back({hyp.logp + std::log(p_tag) + std::log(masked.probs(tok)),
                                tok, tag, h, masked.surface(tok, vocab), tag_diag});
        }
      }
    }
    if (candidates.empty()) break;
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                return std::tuple(-a.logp, a.token, tag_index(a.tag), a.parent) <
                       std::tuple(-b.logp, b.token, tag_index(b.tag), b.parent);
              });
    if (candidates.size() > capacity) candidates.resize(capacity);

    std::vector<Hypothesis> next;
    for (Candidate& c : candidates) {
      Hypothesis hyp{live[c.parent].state, c.logp, c.diag, false};
      if (c.token == static_cast<Eigen::Index>(Vocabulary::kEos)) {
        hyp.finished = true;
        done.push_back(std::move(hyp));
        continue;
      }
      if (c.token >= v) ++hyp.diag.oov_copies;
      push_step(hyp.state, c.tag, c.surface, index, config);
      ++hyp.diag.steps;
      next.push_back(std::move(hyp));
    }
    live = std::move(next);
  }
  for (Hypothesis& hyp : live) done.push_back(std::move(hyp));

  std::vector<DecodeResult> results;
  results.reserve(done.size());
  for (Hypothesis& hyp : done) {
    DecodeResult r;
    r.score = normalized(hyp.logp, hyp.state.emitted_tokens.size(),
                         config.length_penalty);
    r.tokens = std::move(hyp.state.emitted_tokens);
    r.tags = std::move(hyp.state.emitted_tags);
    r.finished = hyp.finished;
    r.diagnostics = hyp.diag;
    results.push_back(std::move(r));
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const DecodeResult& a, const DecodeResult& b) {
                     return a.score > b.score;
                   });
  if (results.size() > config.beam_width) results.resize(config.beam_width);
  return results;
}

DecodeResult decode(const Scorer& scorer, std::span<const Token> source,
                    const Vocabulary& vocab, const DecodeConfig& config) {
  if (config.beam_width == 1) return greedy_decode(scorer, source, vocab, config);
  std::vector<DecodeResult> beams = beam_decode(scorer, source, vocab, config);
  if (beams.empty()) {
    throw Error(ErrorCode::kEmptySupport, "beam search produced no hypothesis");
  }
  return std::move(beams.front());
}

CorpusDecode decode_corpus(const ScorerFactory& factory,
                           std::span<const ExamplePair> pairs,
                           const Vocabulary& vocab, const DecodeConfig& config) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "nothing to decode");
  }
  config.validate();
  CorpusDecode out;
  out.results.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    try {
      std::unique_ptr<Scorer> scorer = factory(k, pairs[k]);
      DecodeResult r = decode(*scorer, pairs[k].source, vocab, config);
      out.totals += r.diagnostics;
      out.results.emplace_back(std::move(r));
    } catch (const Error& e) {
      out.results.emplace_back(std::nullopt);
      out.failures.push_back({k, e.code(), e.what()});
    } catch (const std::exception& e) {
      out.results.emplace_back(std::nullopt);
      out.failures.push_back({k, std::nullopt, e.what()});
    }
  }
  return out;
}

json to_json(const DecodeDiagnostics& d) {
  return {{"steps", d.steps},
          {"scorer_calls", d.scorer_calls},
          {"tag_fallbacks", d.tag_fallbacks},
          {"zero_mass_fallbacks", d.zero_mass_fallbacks},
          {"restricted_steps", d.restricted_steps},
          {"mask_size_total", d.mask_size_total},
          {"oov_copies", d.oov_copies}};
}

json to_json(const DecodeResult& r) {
  json tags = json::array();
  for (BioTag t : r.tags) tags.push_back(std::string(to_string(t)));
  json score = std::isfinite(r.score) ? json(r.score) : json(nullptr);
  return {{"tokens", r.tokens},
          {"tags", std::move(tags)},
          {"score", std::move(score)},
          {"finished", r.finished},
          {"diagnostics", to_json(r.diagnostics)}};
}

DecodeResult decode_result_from_json(const json& doc) {
  try {
    DecodeResult r;
    r.tokens = doc.at("tokens").get<TokenSeq>();
    for (const json& t : doc.at("tags")) r.tags.push_back(parse_tag(t.get<std::string>()));
    if (r.tags.size() != r.tokens.size()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "tags length does not match tokens length");
    }
    const json& score = doc.at("score");
    r.score = score.is_null() ? -std::numeric_limits<double>::infinity()
                              : score.get<double>();
    r.finished = doc.value("finished", false);
    if (auto it = doc.find("diagnostics"); it != doc.end()) {
      DecodeDiagnostics& d = r.diagnostics;
      d.steps = it->value("steps", std::uint64_t{0});
      d.scorer_calls = it->value("scorer_calls", std::uint64_t{0});
      d.tag_fallbacks = it->value("tag_fallbacks", std::uint64_t{0});
      d.zero_mass_fallbacks = it->value("zero_mass_fallbacks", std::uint64_t{0});
      d.restricted_steps = it->value("restricted_steps", std::uint64_t{0});
      d.mask_size_total = it->value("mask_size_total", std::uint64_t{0});
      d.oov_copies = it->value("oov_copies", std::uint64_t{0});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("invalid decode result: ") + e.what());
  }
}

}  // namespace biocopy
