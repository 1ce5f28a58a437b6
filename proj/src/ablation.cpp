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

#include "biocopy/ablation.hpp"

#include <utility>

#include "biocopy/error.hpp"
#include "biocopy/scorer.hpp"
#include "biocopy/tagger.hpp"

namespace biocopy {

AblationConfig default_ablation(std::uint64_t seed) {
  AblationConfig config;
  config.data.vocab_size = 60;
  config.data.num_examples = 500;
  config.data.source_len = {15, 25};
  config.data.spans_per_target = {1, 3};
  config.data.span_len = {2, 5};
  config.data.filler_len = {1, 3};
  config.data.distractor = true;
  config.data.distractor_rate = 0.3;
  config.data.seed = seed;
  config.scorer_seed = seed ^ 0x5EEDULL;
  config.decode.max_len = 64;
  return config;
}

namespace {

AblationArm run_arm(const std::vector<SyntheticExample>& corpus,
                    const std::vector<ExamplePair>& pairs,
                    const Vocabulary& vocab, const AblationConfig& config,
                    bool constrained) {
  DecodeConfig decode = config.decode;
  decode.constrained = constrained;
  const OracleConfusion confusion{Token(kDistractorToken), config.confusion_rate};
  ScorerFactory factory = [&](std::size_t k, const ExamplePair& pair) {
    TaggedExample gold{pair.source, pair.target,
                       tags_from_spans(pair.target.size(), corpus[k].gold_spans)};
    return make_oracle_scorer(gold, vocab, config.noise,
                              config.scorer_seed + 0x9E37ULL * k, confusion);
  };
  CorpusDecode decoded = decode_corpus(factory, pairs, vocab, decode);

  AblationArm arm;
  arm.totals = decoded.totals;
  std::vector<TokenSeq> sources;
  std::vector<TokenSeq> references;
  std::vector<std::vector<GoldSpan>> gold;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    sources.push_back(pairs[k].source);
    references.push_back(pairs[k].target);
    gold.push_back(corpus[k].gold_spans);
    if (const auto& r = decoded.results[k]) {
      const SpanPrediction spans = extract_spans(*r, pairs[k].source);
      arm.runs += spans.total_runs();
      arm.non_contiguous_runs += spans.unmatched_runs;
    }
  }
  arm.report = evaluate(decoded.results, sources, references, gold, config.eval);
  arm.results = std::move(decoded.results);
  return arm;
}

}  // namespace

AblationReport run_ablation(const AblationConfig& config) {
  if (!(config.noise >= 0.0 && config.noise < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "noise must lie in [0, 1)");
  }
  if (!(config.confusion_rate >= 0.0 && config.confusion_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "confusion rate must lie in [0, 1]");
  }
  config.decode.validate();
  AblationReport report;
  report.corpus = generate_synthetic(config.data);
  std::vector<ExamplePair> pairs;
  pairs.reserve(report.corpus.size());
  for (const SyntheticExample& ex : report.corpus) pairs.push_back(ex.pair);
  const Vocabulary vocab = build_vocab(pairs, 1);
  report.unconstrained = run_arm(report.corpus, pairs, vocab, config, false);
  report.constrained = run_arm(report.corpus, pairs, vocab, config, true);
  return report;
}

}  // namespace biocopy
