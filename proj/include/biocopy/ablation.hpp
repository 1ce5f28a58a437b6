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

#ifndef BIOCOPY_ABLATION_HPP_
#define BIOCOPY_ABLATION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "biocopy/corpus.hpp"
#include "biocopy/decoder.hpp"
#include "biocopy/eval.hpp"

namespace biocopy {

// Constrained vs. unconstrained decoding of a synthetic copy corpus with the
// noisy oracle scorer. Gold tags come from the generator's annotations.
struct AblationConfig {
  SyntheticConfig data;
  double noise = 0.4;
  double confusion_rate = 0.1;
  std::uint64_t scorer_seed = 0;
  DecodeConfig decode;
  EvalOptions eval;
};

// The long-span setting: 500 examples, spans of 2-5 tokens, distractor on.
AblationConfig default_ablation(std::uint64_t seed);

struct AblationArm {
  MetricReport report;
  std::vector<std::optional<DecodeResult>> results;
  DecodeDiagnostics totals;
  // Copied runs checked, and those that are not a contiguous source substring.
  std::size_t runs = 0;
  std::size_t non_contiguous_runs = 0;
};

struct AblationReport {
  std::vector<SyntheticExample> corpus;
  AblationArm unconstrained;
  AblationArm constrained;
};

// Throws Error(kInvalidConfig) for noise outside [0, 1), a confusion rate
// outside [0, 1] or an invalid decode config.
AblationReport run_ablation(const AblationConfig& config);

}  // namespace biocopy

#endif  // BIOCOPY_ABLATION_HPP_
