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

#include "biocopy/mask_engine.hpp"

#include <algorithm>
#include <utility>

namespace biocopy {
namespace {

thread_local std::uint64_t g_positions_touched = 0;

std::vector<Token> successors(const DecodeState& state,
                              const SourceIndex& index) {
  std::vector<Token> out;
  for (std::size_t p : state.active_positions) {
    ++g_positions_touched;
    if (p + 1 < index.size()) out.push_back(index[p + 1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SourceIndex::SourceIndex(TokenSeq tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) {
    throw Error(ErrorCode::kEmptySequence, "cannot index an empty source");
  }
  for (std::size_t p = 0; p < tokens_.size(); ++p) {
    occurrences_[tokens_[p]].push_back(p);
  }
  distinct_.reserve(occurrences_.size());
  for (const auto& entry : occurrences_) distinct_.push_back(entry.first);
}

std::span<const std::size_t> SourceIndex::occurrences(
    std::string_view token) const {
  auto it = occurrences_.find(token);
  if (it == occurrences_.end()) return {};
  return it->second;
}

bool SourceIndex::contains(std::string_view token) const {
  return occurrences_.find(token) != occurrences_.end();
}

SourceIndex build_index(TokenSeq source) { return SourceIndex(std::move(source)); }

DecodeState init_state() { return {}; }

TagSet valid_tags(const DecodeState& state, const SourceIndex& index) {
  TagSet tags{BioTag::B, BioTag::O};
  if (state.span_len == 0) return tags;
  for (std::size_t p : state.active_positions) {
    ++g_positions_touched;
    if (p + 1 < index.size()) {
      tags.insert(BioTag::I);
      break;
    }
  }
  return tags;
}

bool AllowedSet::allows(std::string_view token) const {
  if (!restricted()) return true;
  return std::binary_search(tokens.begin(), tokens.end(), token);
}

AllowedSet allowed_tokens(const DecodeState& state, BioTag tag,
                          const SourceIndex& index) {
  if (!valid_tags(state, index).contains(tag)) {
    throw Error(ErrorCode::kInvalidTag,
                "tag " + std::string(to_string(tag)) +
                    " is not valid in the current decode state");
  }
  switch (tag) {
    case BioTag::O:
      return AllowedSet::unrestricted();
    case BioTag::B:
      return {AllowedSet::Kind::kRestricted, index.distinct_tokens()};
    case BioTag::I:
      return {AllowedSet::Kind::kRestricted, successors(state, index)};
  }
  return AllowedSet::unrestricted();
}

void advance_in_place(DecodeState& state, BioTag tag, const Token& token,
                      const SourceIndex& index) {
  if (!valid_tags(state, index).contains(tag)) {
    throw Error(ErrorCode::kInvalidTag,
                "tag " + std::string(to_string(tag)) +
                    " is not valid in the current decode state");
  }
  switch (tag) {
    case BioTag::O:
      state.active_positions.clear();
      state.span_len = 0;
      break;
    case BioTag::B: {
      const auto occ = index.occurrences(token);
      if (occ.empty()) {
        throw Error(ErrorCode::kDisallowedToken,
                    "token '" + token + "' does not occur in source");
      }
      g_positions_touched += occ.size();
      state.active_positions.assign(occ.begin(), occ.end());
      state.span_len = 1;
      break;
    }
    case BioTag::I: {
      std::vector<std::size_t> next;
      for (std::size_t p : state.active_positions) {
        ++g_positions_touched;
        if (p + 1 < index.size() && index[p + 1] == token) next.push_back(p + 1);
      }
      if (next.empty()) {
        throw Error(ErrorCode::kDisallowedToken,
                    "token '" + token + "' does not continue the open span");
      }
      state.active_positions = std::move(next);
      ++state.span_len;
      break;
    }
  }
  state.emitted_tokens.push_back(token);
  state.emitted_tags.push_back(tag);
}

DecodeState advance(const DecodeState& state, BioTag tag, const Token& token,
                    const SourceIndex& index) {
  DecodeState next = state;
  advance_in_place(next, tag, token, index);
  return next;
}

std::vector<std::size_t> match_span(const SourceIndex& index,
                                    std::span<const Token> span) {
  if (span.empty()) return {};
  const auto occ = index.occurrences(span.front());
  std::vector<std::size_t> ends(occ.begin(), occ.end());
  for (std::size_t k = 1; k < span.size() && !ends.empty(); ++k) {
    std::vector<std::size_t> next;
    for (std::size_t p : ends) {
      if (p + 1 < index.size() && index[p + 1] == span[k]) next.push_back(p + 1);
    }
    ends = std::move(next);
  }
  return ends;
}

std::uint64_t positions_touched() noexcept { return g_positions_touched; }
void reset_positions_touched() noexcept { g_positions_touched = 0; }

std::vector<Eigen::Index> allowed_indices(const AllowedSet& allowed,
                                          const Vocabulary& vocab) {
  std::vector<Eigen::Index> out;
  out.reserve(allowed.tokens.size());
  for (const Token& t : allowed.tokens) {
    if (auto idx = vocab.find(t); idx && !Vocabulary::is_reserved(*idx)) {
      out.push_back(static_cast<Eigen::Index>(*idx));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Token> out_of_vocab(const AllowedSet& allowed,
                                const Vocabulary& vocab) {
  std::vector<Token> out;
  for (const Token& t : allowed.tokens) {
    if (!vocab.contains(t)) out.push_back(t);
  }
  return out;
}

namespace detail {

void check_distribution(const Eigen::Ref<const Eigen::VectorXd>& dist,
                        std::size_t expected_size, double tolerance) {
  if (static_cast<std::size_t>(dist.size()) != expected_size) {
    throw Error(ErrorCode::kInvalidDistribution,
                "distribution has " + std::to_string(dist.size()) +
                    " entries, expected " + std::to_string(expected_size));
  }
  if (!dist.allFinite() || (dist.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidDistribution,
                "distribution has negative or non-finite entries");
  }
  if (std::abs(dist.sum() - 1.0) > tolerance) {
    throw Error(ErrorCode::kInvalidDistribution,
                "distribution sums to " + std::to_string(dist.sum()));
  }
}

}  // namespace detail
}  // namespace biocopy
