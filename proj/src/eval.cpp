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

#include "biocopy/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "biocopy/error.hpp"
#include "biocopy/tagger.hpp"

namespace biocopy {
namespace {

double f_measure(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

using Interval = std::pair<std::size_t, std::size_t>;

// Gold source intervals per example, with multiplicity.
std::map<Interval, std::size_t> interval_counts(std::span<const GoldSpan> spans) {
  std::map<Interval, std::size_t> counts;
  for (const GoldSpan& s : spans) ++counts[{s.src_start, s.src_end}];
  return counts;
}

void check_aligned(std::size_t predicted, std::size_t gold) {
  if (predicted != gold) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(predicted) + " predictions for " +
                    std::to_string(gold) + " gold examples");
  }
}

}  // namespace

SpanPrediction extract_spans(std::span<const Token> tokens,
                             std::span<const BioTag> tags,
                             const SourceIndex& source) {
  SpanPrediction out;
  const std::size_t n = std::min(tokens.size(), tags.size());
  for (const TagRun& run : tag_runs(tags.first(n))) {
    const std::vector<std::size_t> ends =
        match_span(source, tokens.subspan(run.start, run.length()));
    if (ends.empty()) {
      ++out.unmatched_runs;
      continue;
    }
    const std::size_t end = ends.front() + 1;
    out.spans.push_back({end - run.length(), end, run.start, run.end});
  }
  return out;
}

SpanPrediction extract_spans(const DecodeResult& result,
                             std::span<const Token> source) {
  return extract_spans(result.tokens, result.tags,
                       SourceIndex(TokenSeq(source.begin(), source.end())));
}

std::vector<GoldSpan> spans_from_tags(std::span<const Token> source,
                                      std::span<const Token> target,
                                      std::span<const BioTag> tags) {
  return extract_spans(target, tags,
                       SourceIndex(TokenSeq(source.begin(), source.end())))
      .spans;
}

Prf span_prf(std::span<const SpanPrediction> predicted,
             std::span<const std::vector<GoldSpan>> gold) {
  check_aligned(predicted.size(), gold.size());
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  std::size_t correct = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    auto remaining = interval_counts(gold[k]);
    n_gold += gold[k].size();
    n_pred += predicted[k].total_runs();
    for (const PredictedSpan& s : predicted[k].spans) {
      auto it = remaining.find({s.src_start, s.src_end});
      if (it != remaining.end() && it->second > 0) {
        --it->second;
        ++correct;
      }
    }
  }
  Prf out;
  out.precision = n_pred > 0 ? static_cast<double>(correct) / static_cast<double>(n_pred) : 0.0;
  out.recall = n_gold > 0 ? static_cast<double>(correct) / static_cast<double>(n_gold) : 0.0;
  out.f1 = f_measure(out.precision, out.recall);
  return out;
}

std::optional<double> long_span_error_pct(
    std::span<const SpanPrediction> predicted,
    std::span<const std::vector<GoldSpan>> gold, std::size_t min_len) {
  check_aligned(predicted.size(), gold.size());
  std::size_t long_spans = 0;
  std::size_t missed = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    std::map<Interval, std::size_t> available;
    for (const PredictedSpan& s : predicted[k].spans) ++available[{s.src_start, s.src_end}];
    for (const GoldSpan& g : gold[k]) {
      if (g.length() < min_len) continue;
      ++long_spans;
      auto it = available.find({g.src_start, g.src_end});
      if (it != available.end() && it->second > 0) {
        --it->second;
      } else {
        ++missed;
      }
    }
  }
  if (long_spans == 0) return std::nullopt;
  return 100.0 * static_cast<double>(missed) / static_cast<double>(long_spans);
}

RougeScore rouge_n(std::span<const Token> candidate,
                   std::span<const Token> reference, int n) {
  if (candidate.empty() || reference.empty()) {
    throw Error(ErrorCode::kEmptySequence, "ROUGE of an empty sequence");
  }
  if (n < 1) throw Error(ErrorCode::kInvalidConfig, "ROUGE order must be >= 1");
  const auto order = static_cast<std::size_t>(n);
  if (candidate.size() < order || reference.size() < order) return {};

  using Gram = std::vector<std::string_view>;
  auto grams = [order](std::span<const Token> seq) {
    std::map<Gram, std::size_t> counts;
    for (std::size_t i = 0; i + order <= seq.size(); ++i) {
      ++counts[Gram(seq.begin() + static_cast<std::ptrdiff_t>(i),
                    seq.begin() + static_cast<std::ptrdiff_t>(i + order))];
    }
    return counts;
  };
  const auto cand = grams(candidate);
  const auto ref = grams(reference);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  }
  RougeScore s;
  s.precision = static_cast<double>(overlap) /
                static_cast<double>(candidate.size() - order + 1);
  s.recall = static_cast<double>(overlap) /
             static_cast<double>(reference.size() - order + 1);
  s.f = f_measure(s.precision, s.recall);
  return s;
}

RougeScore rouge_l(std::span<const Token> candidate,
                   std::span<const Token> reference) {
  const LcsTable table = lcs_length_table(candidate, reference);
  const auto lcs = static_cast<double>(table(table.rows() - 1, table.cols() - 1));
  RougeScore s;
  s.precision = lcs / static_cast<double>(candidate.size());
  s.recall = lcs / static_cast<double>(reference.size());
  s.f = f_measure(s.precision, s.recall);
  return s;
}

double rouge_total(double r1, double r2, double rl, const RougeWeights& w) {
  if (w[0] < 0.0 || w[1] < 0.0 || w[2] < 0.0 ||
      std::abs(w[0] + w[1] + w[2] - 1.0) > 1e-9) {
    throw Error(ErrorCode::kWeightSum,
                "ROUGE weights must be non-negative and sum to 1");
  }
  return w[0] * r1 + w[1] * r2 + w[2] * rl;
}

MetricReport evaluate(std::span<const std::optional<DecodeResult>> predictions,
                      std::span<const TokenSeq> sources,
                      std::span<const TokenSeq> references,
                      std::span<const std::vector<GoldSpan>> gold,
                      const EvalOptions& options) {
  check_aligned(predictions.size(), gold.size());
  check_aligned(sources.size(), gold.size());
  check_aligned(references.size(), gold.size());
  if (gold.empty()) throw Error(ErrorCode::kEmptyCorpus, "nothing to evaluate");

  std::vector<SpanPrediction> spans;
  spans.reserve(gold.size());
  MetricReport report;
  report.examples = gold.size();
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const std::optional<DecodeResult>& pred = predictions[k];
    if (!pred) {
      ++report.failed;
      spans.emplace_back();
      continue;
    }
    spans.push_back(extract_spans(*pred, sources[k]));
    if (pred->tokens.empty()) continue;
    report.rouge1 += rouge_n(pred->tokens, references[k], 1).f;
    report.rouge2 += rouge_n(pred->tokens, references[k], 2).f;
    report.rougeL += rouge_l(pred->tokens, references[k]).f;
  }
  const auto n = static_cast<double>(gold.size());
  report.rouge1 /= n;
  report.rouge2 /= n;
  report.rougeL /= n;
  report.rouge_total = rouge_total(report.rouge1, report.rouge2, report.rougeL,
                                   options.rouge_weights);
  const Prf prf = span_prf(spans, gold);
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  report.long_span_error_pct = long_span_error_pct(spans, gold, options.min_span_len);
  return report;
}

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json lse = r.long_span_error_pct ? nlohmann::json(*r.long_span_error_pct)
                                             : nlohmann::json(nullptr);
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"long_span_error_pct", std::move(lse)},
          {"rouge1", r.rouge1},
          {"rouge2", r.rouge2},
          {"rougeL", r.rougeL},
          {"rouge_total", r.rouge_total},
          {"examples", r.examples},
          {"failed", r.failed}};
}

std::string format_report(const MetricReport& r, const std::string& title) {
  std::ostringstream out;
  char buf[96];
  auto row = [&](const char* name, double value) {
    std::snprintf(buf, sizeof buf, "  %-22s %8.4f\n", name, value);
    out << buf;
  };
  out << title << '\n';
  row("precision", r.precision);
  row("recall", r.recall);
  row("f1", r.f1);
  if (r.long_span_error_pct) {
    std::snprintf(buf, sizeof buf, "  %-22s %7.2f%%\n", "long_span_error_pct",
                  *r.long_span_error_pct);
    out << buf;
  } else {
    std::snprintf(buf, sizeof buf, "  %-22s %8s\n", "long_span_error_pct", "n/a");
    out << buf;
  }
  row("rouge1", r.rouge1);
  row("rouge2", r.rouge2);
  row("rougeL", r.rougeL);
  row("rouge_total", r.rouge_total);
  std::snprintf(buf, sizeof buf, "  %-22s %8zu\n  %-22s %8zu\n", "examples",
                r.examples, "failed", r.failed);
  out << buf;
  return out.str();
}

}  // namespace biocopy
