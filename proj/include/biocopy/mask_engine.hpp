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

#ifndef BIOCOPY_MASK_ENGINE_HPP_
#define BIOCOPY_MASK_ENGINE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "biocopy/corpus.hpp"
#include "biocopy/error.hpp"
#include "biocopy/types.hpp"

namespace biocopy {

// Immutable token -> sorted positions index over one source sequence.
class SourceIndex {
 public:
  // Throws Error(kEmptySequence) for an empty source.
  explicit SourceIndex(TokenSeq tokens);

  const TokenSeq& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t pos) const { return tokens_[pos]; }

  // Empty span for tokens absent from the source.
  std::span<const std::size_t> occurrences(std::string_view token) const;
  bool contains(std::string_view token) const;
  // Sorted, unique.
  const std::vector<Token>& distinct_tokens() const { return distinct_; }

 private:
  TokenSeq tokens_;
  std::map<Token, std::vector<std::size_t>, std::less<>> occurrences_;
  std::vector<Token> distinct_;
};

SourceIndex build_index(TokenSeq source);

// Decode-time span tracking. `active_positions` holds every source position
// p at which the open span (trailing B I* run, of length span_len) ends, in
// ascending order.
struct DecodeState {
  TokenSeq emitted_tokens;
  std::vector<BioTag> emitted_tags;
  std::vector<std::size_t> active_positions;
  std::size_t span_len = 0;

  friend bool operator==(const DecodeState&, const DecodeState&) = default;
};

DecodeState init_state();

// O always; B always (sources are non-empty); I only when some active
// position has a successor.
TagSet valid_tags(const DecodeState& state, const SourceIndex& index);

struct AllowedSet {
  enum class Kind { kUnrestricted, kRestricted };

  Kind kind = Kind::kUnrestricted;
  std::vector<Token> tokens;  // sorted, unique; empty when unrestricted

  bool restricted() const { return kind == Kind::kRestricted; }
  bool allows(std::string_view token) const;

  static AllowedSet unrestricted() { return {}; }
  friend bool operator==(const AllowedSet&, const AllowedSet&) = default;
};

// O: unrestricted. B: the distinct source tokens. I: the source successors
// of the active positions. Throws Error(kInvalidTag) if `tag` is not in
// valid_tags(state, index).
AllowedSet allowed_tokens(const DecodeState& state, BioTag tag,
                          const SourceIndex& index);

// Appends (token, tag) and updates the span. Throws Error(kInvalidTag) or
// Error(kDisallowedToken) when the step violates the current mask.
DecodeState advance(const DecodeState& state, BioTag tag, const Token& token,
                    const SourceIndex& index);
void advance_in_place(DecodeState& state, BioTag tag, const Token& token,
                      const SourceIndex& index);

// End positions of every occurrence of `span` in the source, ascending.
// Uses the same incremental filter as advance.
std::vector<std::size_t> match_span(const SourceIndex& index,
                                    std::span<const Token> span);

// Number of source positions examined by valid_tags, allowed_tokens and
// advance on the calling thread.
std::uint64_t positions_touched() noexcept;
void reset_positions_touched() noexcept;

// Vocabulary indices of the allowed tokens, ascending. Reserved symbols are
// never returned, and tokens outside the vocabulary are dropped.
std::vector<Eigen::Index> allowed_indices(const AllowedSet& allowed,
                                          const Vocabulary& vocab);

// Source tokens in a restricted set that the vocabulary cannot express.
std::vector<Token> out_of_vocab(const AllowedSet& allowed,
                                const Vocabulary& vocab);

namespace detail {
void check_distribution(const Eigen::Ref<const Eigen::VectorXd>& dist,
                        std::size_t expected_size, double tolerance);
}  // namespace detail

// Zeroes every entry outside `allowed` and renormalizes the rest. When the
// allowed entries carry no mass the result is uniform over them. Throws
// Error(kEmptySupport) when no allowed token is in the vocabulary and
// Error(kInvalidDistribution) for a malformed input.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> apply_mask(
    const Eigen::MatrixBase<Derived>& dist, const AllowedSet& allowed,
    const Vocabulary& vocab) {
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Derived)
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  detail::check_distribution(dist.template cast<double>(), vocab.size(), 1e-6);
  if (!allowed.restricted()) return dist;

  const std::vector<Eigen::Index> support = allowed_indices(allowed, vocab);
  if (support.empty()) {
    throw Error(ErrorCode::kEmptySupport,
                "no allowed token is present in the vocabulary");
  }
  Scalar mass(0);
  for (Eigen::Index idx : support) mass += dist(idx);
  Vector out = Vector::Zero(dist.size());
  if (mass > Scalar(0)) {
    for (Eigen::Index idx : support) out(idx) = dist(idx) / mass;
  } else {
    const Scalar uniform = Scalar(1) / static_cast<Scalar>(support.size());
    for (Eigen::Index idx : support) out(idx) = uniform;
  }
  return out;
}

}  // namespace biocopy

#endif  // BIOCOPY_MASK_ENGINE_HPP_
