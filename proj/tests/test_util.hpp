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

// Small helpers shared by the unit tests.

#ifndef BIOCOPY_TESTS_TEST_UTIL_HPP_
#define BIOCOPY_TESTS_TEST_UTIL_HPP_

#include <optional>
#include <utility>

#include "biocopy/error.hpp"

namespace testing_support {

// The error thrown by `fn`, or nullopt when it returns normally.
template <typename Fn>
std::optional<biocopy::Error> error_of(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const biocopy::Error& e) {
    return e;
  }
  return std::nullopt;
}

template <typename Fn>
std::optional<biocopy::ErrorCode> code_of(Fn&& fn) {
  auto e = error_of(std::forward<Fn>(fn));
  if (!e) return std::nullopt;
  return e->code();
}

}  // namespace testing_support

#endif  // BIOCOPY_TESTS_TEST_UTIL_HPP_
