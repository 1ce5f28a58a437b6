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

#ifndef BIOCOPY_ERROR_HPP_
#define BIOCOPY_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace biocopy {

enum class ErrorCode {
  kEmptyInput,
  kEmptySequence,
  kEmptyCorpus,
  kInvalidConfig,
  kConfigInfeasible,
  kMalformedRecord,
  kMissingField,
  kIo,
  kLengthMismatch,
  kWeightSum,
  kInvalidDistribution,
  kVersionMismatch,
  // Decoder-contract violations: reaching these means a caller bug.
  kInvalidTag,
  kDisallowedToken,
  kEmptySupport,
};

std::string_view to_string(ErrorCode code);

// True for codes that indicate bad input data rather than a broken invariant.
bool is_data_error(ErrorCode code);

// All library failures are reported with this type. `line` is set for
// file-backed errors (1-based), `index` for per-example errors in a batch.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

  Error with_line(std::size_t line) const;
  Error with_index(std::size_t index) const;
  // Prefixes the message, keeping code, line and index.
  Error with_context(const std::string& prefix) const;

 private:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line, std::optional<std::size_t> index);

  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> index_;
};

}  // namespace biocopy

#endif  // BIOCOPY_ERROR_HPP_
