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

#ifndef BIOCOPY_EVAL_HPP_
#define BIOCOPY_EVAL_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biocopy/corpus.hpp"
#include "biocopy/decoder.hpp"
#include "biocopy/mask_engine.hpp"
#include "biocopy/types.hpp"
#include "json.hpp"

namespace biocopy {

// A copied run that reproduces the source verbatim. Stored in the same
// layout as a gold annotation so the two compare directly.
using PredictedSpan = GoldSpan;

struct SpanPrediction {
  std::vector<PredictedSpan> spans;  // sorted by target position
  // Copied runs whose tokens are not a contiguous source substring.
  std::size_t unmatched_runs = 0;

  std::size_t total_runs() const { return spans.size() + unmatched_runs; }
};

// One span per tag run; the source interval is the leftmost occurrence of the
// run's tokens in the source.
SpanPrediction extract_spans(std::span<const Token> tokens,
                             std::span<const BioTag> tags,
                             const SourceIndex& source);
SpanPrediction extract_spans(const DecodeResult& result,
                             std::span<const Token> source);

// Gold annotations for a tagged pair, read off its tag runs.
std::vector<GoldSpan> spans_from_tags(std::span<const Token> source,
                                      std::span<const Token> target,
                                      std::span<const BioTag> tags);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro-averaged. A predicted span is correct when its source interval (and
// hence its tokens) matches a not-yet-matched gold span of the same example.
// Throws Error(kLengthMismatch) when the lists are not aligned.
Prf span_prf(std::span<const SpanPrediction> predicted,
             std::span<const std::vector<GoldSpan>> gold);

// Percentage of gold spans of length >= min_len that no prediction
// recovers; nullopt when there is no such gold span.
std::optional<double> long_span_error_pct(
    std::span<const SpanPrediction> predicted,
    std::span<const std::vector<GoldSpan>> gold, std::size_t min_len = 2);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// Clipped n-gram overlap, n in {1, 2}. Throws Error(kEmptySequence) for an
// empty input; a sequence shorter than n scores 0.
RougeScore rouge_n(std::span<const Token> candidate,
                   std::span<const Token> reference, int n);
RougeScore rouge_l(std::span<const Token> candidate,
                   std::span<const Token> reference);

using RougeWeights = std::array<double, 3>;
inline constexpr RougeWeights kEqualRougeWeights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

// Throws Error(kWeightSum) unless weights are non-negative and sum to 1.
double rouge_total(double r1, double r2, double rl, const RougeWeights& weights);

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> long_span_error_pct;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
  double rouge_total = 0.0;
  std::size_t examples = 0;
  std::size_t failed = 0;  // predictions missing (decode errors)
};

struct EvalOptions {
  std::size_t min_span_len = 2;
  RougeWeights rouge_weights = kEqualRougeWeights;
};

// ROUGE scores are per-example F averages; a missing or empty prediction
// scores 0 on every metric.
MetricReport evaluate(std::span<const std::optional<DecodeResult>> predictions,
                      std::span<const TokenSeq> sources,
                      std::span<const TokenSeq> references,
                      std::span<const std::vector<GoldSpan>> gold,
                      const EvalOptions& options = {});

nlohmann::json to_json(const MetricReport& report);
std::string format_report(const MetricReport& report, const std::string& title);

}  // namespace biocopy

#endif  // BIOCOPY_EVAL_HPP_
