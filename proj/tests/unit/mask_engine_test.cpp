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

#include <random>
#include <set>

#include "biocopy/error.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "traces.hpp"

using namespace biocopy;
using enum BioTag;
using testing_support::code_of;

namespace {

TokenSeq seq(std::initializer_list<const char*> items) {
  return TokenSeq(items.begin(), items.end());
}

const TokenSeq kRocketSource = seq({"SpaceX", "launches", "Falcon", "9", "rocket",
                                    "from", "Florida"});

std::vector<std::size_t> positions(const SourceIndex& index, const char* token) {
  const auto occ = index.occurrences(token);
  return {occ.begin(), occ.end()};
}

DecodeState replay(const SourceIndex& index,
                   std::initializer_list<std::pair<BioTag, const char*>> steps) {
  DecodeState s = init_state();
  for (const auto& [tag, token] : steps) s = advance(s, tag, token, index);
  return s;
}

}  // namespace

TEST_CASE("build_index") {
  const SourceIndex aba = build_index(seq({"a", "b", "a"}));
  CHECK(positions(aba, "a") == std::vector<std::size_t>{0, 2});
  CHECK(positions(aba, "b") == std::vector<std::size_t>{1});
  CHECK(positions(aba, "z").empty());
  CHECK(aba.distinct_tokens() == seq({"a", "b"}));
  CHECK(positions(build_index(seq({"x"})), "x") == std::vector<std::size_t>{0});
  CHECK(code_of([] { build_index({}); }) == ErrorCode::kEmptySequence);

  SUBCASE("every position lands in exactly one sorted list") {
    std::mt19937_64 rng(1);
    const TokenSeq source = oracle::random_tokens(rng, 1000, 7);
    const SourceIndex index = build_index(source);
    std::size_t total = 0;
    std::set<std::size_t> seen;
    for (const Token& tok : index.distinct_tokens()) {
      const auto occ = index.occurrences(tok);
      CHECK(std::is_sorted(occ.begin(), occ.end()));
      for (std::size_t p : occ) {
        CHECK(source[p] == tok);
        seen.insert(p);
      }
      total += occ.size();
    }
    CHECK(total == 1000);
    CHECK(seen.size() == 1000);
  }
}

TEST_CASE("initial state") {
  const SourceIndex index = build_index(seq({"a", "b"}));
  const DecodeState s = init_state();
  CHECK(s.span_len == 0);
  CHECK(s.active_positions.empty());
  CHECK(valid_tags(s, index) == TagSet{B, O});
  CHECK(allowed_tokens(s, O, index) == AllowedSet::unrestricted());
  CHECK(code_of([&] { allowed_tokens(s, I, index); }) == ErrorCode::kInvalidTag);
}

TEST_CASE("valid tags") {
  const SourceIndex index = build_index(kRocketSource);
  CHECK(valid_tags(replay(index, {{B, "Florida"}}), index) == TagSet{B, O});
  CHECK(valid_tags(replay(index, {{B, "SpaceX"}, {I, "launches"}}), index) ==
        TagSet{B, I, O});
  CHECK(valid_tags(replay(index, {{B, "SpaceX"}, {O, "x"}}), index) == TagSet{B, O});
}

TEST_CASE("allowed tokens") {
  const SourceIndex rocket = build_index(kRocketSource);
  const DecodeState span = replay(rocket, {{B, "SpaceX"}, {I, "launches"}});
  const AllowedSet next = allowed_tokens(span, I, rocket);
  CHECK(next.restricted());
  CHECK(next.tokens == seq({"Falcon"}));
  CHECK(next.allows("Falcon"));
  CHECK_FALSE(next.allows("rocket"));

  const SourceIndex aba = build_index(seq({"a", "b", "a"}));
  CHECK(allowed_tokens(init_state(), B, aba).tokens == seq({"a", "b"}));

  const SourceIndex abac = build_index(seq({"a", "b", "a", "c"}));
  CHECK(allowed_tokens(replay(abac, {{B, "a"}}), I, abac).tokens == seq({"b", "c"}));
}

TEST_CASE("advance") {
  const SourceIndex rocket = build_index(kRocketSource);
  const DecodeState b = advance(init_state(), B, "SpaceX", rocket);
  CHECK(b.span_len == 1);
  CHECK(b.active_positions == positions(rocket, "SpaceX"));
  CHECK(b.emitted_tokens == seq({"SpaceX"}));
  CHECK(b.emitted_tags == std::vector<BioTag>{B});

  const DecodeState o = advance(b, O, "anything", rocket);
  CHECK(o.span_len == 0);
  CHECK(o.active_positions.empty());

  const SourceIndex ab = build_index(seq({"a", "b", "a", "b", "c"}));
  const DecodeState s = replay(ab, {{B, "a"}, {I, "b"}});
  CHECK(s.span_len == 2);
  CHECK(s.active_positions == std::vector<std::size_t>{1, 3});
  CHECK(match_span(ab, seq({"a", "b"})) == s.active_positions);
  CHECK(match_span(ab, seq({"b", "a", "b"})) == std::vector<std::size_t>{3});

  SUBCASE("violations") {
    CHECK(code_of([&] { advance(init_state(), I, "a", ab); }) == ErrorCode::kInvalidTag);
    CHECK(code_of([&] { advance(init_state(), B, "zzz", ab); }) ==
          ErrorCode::kDisallowedToken);
    CHECK(code_of([&] { advance(s, I, "b", ab); }) == ErrorCode::kDisallowedToken);
    const DecodeState end = replay(ab, {{B, "c"}});
    CHECK(code_of([&] { advance(end, I, "a", ab); }) == ErrorCode::kInvalidTag);
  }
}

TEST_CASE("reachable states match a window scan") {
  std::mt19937_64 rng(23);
  const TokenSeq noise = seq({"a", "b", "q"});
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_int_distribution<std::size_t> voc(1, 5);
  std::uniform_int_distribution<std::size_t> steps(0, 10);
  for (int trial = 0; trial < 2000; ++trial) {
    const TokenSeq source = oracle::random_tokens(rng, len(rng), voc(rng));
    const SourceIndex index = build_index(source);
    const DecodeState state = testing_support::random_walk(rng, index, steps(rng), noise);
    const TokenSeq open = testing_support::open_span(state);
    CAPTURE(trial);

    CHECK(state.emitted_tokens.size() == state.emitted_tags.size());
    CHECK(state.span_len == open.size());
    CHECK(state.span_len <= source.size());
    CHECK((state.span_len == 0) == state.active_positions.empty());
    CHECK(oracle::is_substring(source, open));
    CHECK(std::is_sorted(state.active_positions.begin(), state.active_positions.end()));

    // Active positions are the ends of every occurrence of the open span.
    std::vector<std::size_t> ends;
    for (std::size_t s : oracle::occurrences(source, open)) ends.push_back(s + open.size() - 1);
    CHECK(state.active_positions == ends);

    const std::set<Token> want = oracle::window_continuations(source, open);
    const TagSet valid = valid_tags(state, index);
    CHECK(valid.contains(I) == (state.span_len > 0 && !want.empty()));
    if (valid.contains(I)) {
      const AllowedSet got = allowed_tokens(state, I, index);
      CHECK(got.tokens == std::vector<Token>(want.begin(), want.end()));
    }
  }
}

TEST_CASE("cost is proportional to active positions") {
  // A long source with one rare token: masking after it must not scan the rest.
  TokenSeq source(20000, "f");
  source[100] = "r";
  source[101] = "s";
  const SourceIndex index = build_index(source);
  DecodeState s = advance(init_state(), B, "r", index);
  reset_positions_touched();
  const AllowedSet next = allowed_tokens(s, I, index);
  s = advance(s, I, "s", index);
  CHECK(next.tokens == seq({"s"}));
  CHECK(positions_touched() <= 4);

  std::mt19937_64 rng(31);
  const TokenSeq noise = seq({"z"});
  for (int trial = 0; trial < 500; ++trial) {
    const SourceIndex small = build_index(oracle::random_tokens(rng, 12, 3));
    DecodeState st = testing_support::random_walk(rng, small, trial % 6, noise);
    const TagSet valid = valid_tags(st, small);
    if (!valid.contains(I)) continue;
    const std::size_t before = st.active_positions.size();
    reset_positions_touched();
    const AllowedSet allowed = allowed_tokens(st, I, small);
    advance_in_place(st, I, allowed.tokens.front(), small);
    CHECK(positions_touched() <= 4 * before);
  }
}

TEST_CASE("allowed_indices skips reserved and unknown surfaces") {
  const Vocabulary vocab({"a", "b", "c"});
  const AllowedSet set{AllowedSet::Kind::kRestricted, seq({"</s>", "a", "c", "zz"})};
  CHECK(allowed_indices(set, vocab) == std::vector<Eigen::Index>{4, 6});
  CHECK(out_of_vocab(set, vocab) == seq({"zz"}));
}

TEST_CASE("apply_mask") {
  const Vocabulary vocab({"a", "b", "c", "d"});
  const Eigen::Index n = static_cast<Eigen::Index>(vocab.size());
  auto dist = [&](double a, double b, double c, double d) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v.tail<4>() << a, b, c, d;
    return v;
  };
  const AllowedSet ab{AllowedSet::Kind::kRestricted, seq({"a", "b"})};

  const Eigen::VectorXd half = apply_mask(dist(0.25, 0.25, 0.25, 0.25), ab, vocab);
  CHECK(half.isApprox(dist(0.5, 0.5, 0, 0)));
  CHECK(half(6) == 0.0);
  CHECK(half(7) == 0.0);

  const Eigen::VectorXd onehot = dist(1, 0, 0, 0);
  CHECK(apply_mask(onehot, AllowedSet{AllowedSet::Kind::kRestricted, seq({"a"})}, vocab) ==
        onehot);

  Eigen::VectorXd zero_mass = apply_mask(dist(0, 0, 0.7, 0.3), ab, vocab);
  CHECK(zero_mass == dist(0.5, 0.5, 0, 0));

  const Eigen::VectorXd any = dist(0.1, 0.2, 0.3, 0.4);
  CHECK(apply_mask(any, AllowedSet::unrestricted(), vocab) == any);

  SUBCASE("single precision") {
    const Eigen::VectorXf f = dist(0.25, 0.25, 0.25, 0.25).cast<float>();
    const Eigen::VectorXf out = apply_mask(f, ab, vocab);
    CHECK(out(4) == doctest::Approx(0.5));
    CHECK(out(7) == 0.0f);
  }
  SUBCASE("errors") {
    const AllowedSet nothing{AllowedSet::Kind::kRestricted, seq({"zz", "</s>"})};
    CHECK(code_of([&] { apply_mask(any, nothing, vocab); }) == ErrorCode::kEmptySupport);
    CHECK(code_of([&] { apply_mask(dist(0.5, 0.5, 0.5, 0), ab, vocab); }) ==
          ErrorCode::kInvalidDistribution);
    CHECK(code_of([&] { apply_mask(Eigen::VectorXd::Ones(3), ab, vocab); }) ==
          ErrorCode::kInvalidDistribution);
    CHECK(code_of([&] { apply_mask(dist(1.5, -0.5, 0, 0), ab, vocab); }) ==
          ErrorCode::kInvalidDistribution);
  }
  SUBCASE("random masks sum to one and zero the complement") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const TokenSeq all = seq({"a", "b", "c", "d"});
    for (int trial = 0; trial < 500; ++trial) {
      Eigen::VectorXd v(n);
      for (Eigen::Index k = 0; k < n; ++k) v(k) = u(rng) < 0.3 ? 0.0 : u(rng);
      if (v.sum() == 0.0) v(0) = 1.0;
      v /= v.sum();
      AllowedSet set{AllowedSet::Kind::kRestricted, {}};
      for (const Token& t : all) {
        if (u(rng) < 0.5) set.tokens.push_back(t);
      }
      if (set.tokens.empty()) set.tokens.push_back("c");
      const Eigen::VectorXd out = apply_mask(v, set, vocab);
      CHECK(std::abs(out.sum() - 1.0) < 1e-9);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (!set.allows(vocab.surface(static_cast<std::size_t>(k))) || vocab.is_reserved(static_cast<std::size_t>(k))) {
          CHECK(out(k) == 0.0);
        }
      }
    }
  }
}
