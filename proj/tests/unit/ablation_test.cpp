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

#include "biocopy/error.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace biocopy;
using testing_support::code_of;

TEST_CASE("ablation arms") {
  AblationConfig config = default_ablation(5);
  CHECK(config.data.num_examples == 500);
  CHECK(config.data.distractor);
  CHECK(config.data.span_len.min == 2);
  CHECK(config.data.span_len.max == 5);
  config.data.num_examples = 80;

  const AblationReport r = run_ablation(config);
  REQUIRE(r.corpus.size() == 80);
  CHECK(r.unconstrained.results.size() == 80);
  CHECK(r.constrained.results.size() == 80);
  CHECK(r.constrained.report.failed == 0);
  CHECK(r.constrained.non_contiguous_runs == 0);
  CHECK(r.constrained.runs > 0);

  std::size_t runs = 0;
  for (std::size_t k = 0; k < r.corpus.size(); ++k) {
    const auto& res = r.constrained.results[k];
    REQUIRE(res.has_value());
    for (const TokenSeq& run : oracle::copied_runs(res->tokens, res->tags)) {
      CHECK(oracle::is_substring(r.corpus[k].pair.source, run));
      ++runs;
    }
  }
  CHECK(runs == r.constrained.runs);
  CHECK(r.unconstrained.report.long_span_error_pct.has_value());

  SUBCASE("deterministic") {
    const AblationReport again = run_ablation(config);
    CHECK(again.constrained.results == r.constrained.results);
    CHECK(again.unconstrained.results == r.unconstrained.results);
  }
  SUBCASE("invalid settings are rejected up front") {
    AblationConfig bad = config;
    bad.noise = 1.0;
    CHECK(code_of([&] { run_ablation(bad); }) == ErrorCode::kInvalidConfig);
    bad = config;
    bad.confusion_rate = -0.5;
    CHECK(code_of([&] { run_ablation(bad); }) == ErrorCode::kInvalidConfig);
    bad = config;
    bad.decode.beam_width = 0;
    CHECK(code_of([&] { run_ablation(bad); }) == ErrorCode::kInvalidConfig);
  }
}
