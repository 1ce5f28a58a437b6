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

// Scorers used only by tests.

#ifndef BIOCOPY_TESTS_TEST_SCORERS_HPP_
#define BIOCOPY_TESTS_TEST_SCORERS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "biocopy/scorer.hpp"

namespace testing_support {

// Pseudo-random but deterministic: the distributions are a pure function of
// (seed, emitted prefix). `peak` sharpens them so argmax is rarely tied.
class RandomScorer final : public biocopy::Scorer {
 public:
  RandomScorer(std::size_t vocab_size, std::uint64_t seed, double peak = 3.0)
      : vocab_size_(vocab_size), seed_(seed), peak_(peak) {}

  biocopy::StepScores score_step(const biocopy::ScorerContext& ctx) const override {
    std::uint64_t h = seed_ * 0x9E3779B97F4A7C15ULL + 1;
    for (const auto& t : ctx.emitted_tokens) {
      for (char c : t) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ULL;
      h = (h ^ 0xFF) * 0x100000001B3ULL;
    }
    for (auto tag : ctx.emitted_tags) {
      h = (h ^ (biocopy::tag_index(tag) + 7)) * 0x100000001B3ULL;
    }
    std::mt19937_64 rng(h);
    std::exponential_distribution<double> expo(1.0);
    biocopy::StepScores s;
    s.token_dist.resize(static_cast<Eigen::Index>(vocab_size_));
    for (Eigen::Index i = 0; i < s.token_dist.size(); ++i) {
      s.token_dist(i) = std::pow(expo(rng), peak_);
    }
    s.token_dist /= s.token_dist.sum();
    for (Eigen::Index i = 0; i < 3; ++i) s.tag_dist(i) = std::pow(expo(rng), peak_);
    s.tag_dist /= s.tag_dist.sum();
    return s;
  }
  std::size_t vocab_size() const override { return vocab_size_; }

 private:
  std::size_t vocab_size_;
  std::uint64_t seed_;
  double peak_;
};

// Table-driven: distributions keyed by the emitted prefix (tokens joined by
// spaces); unknown prefixes fall back to `fallback`.
class TableScorer final : public biocopy::Scorer {
 public:
  using Fn = std::function<biocopy::StepScores(const biocopy::ScorerContext&)>;
  TableScorer(std::size_t vocab_size, Fn fn) : vocab_size_(vocab_size), fn_(std::move(fn)) {}

  biocopy::StepScores score_step(const biocopy::ScorerContext& ctx) const override {
    return fn_(ctx);
  }
  std::size_t vocab_size() const override { return vocab_size_; }

 private:
  std::size_t vocab_size_;
  Fn fn_;
};

}  // namespace testing_support

#endif  // BIOCOPY_TESTS_TEST_SCORERS_HPP_
