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

#include "biocopy/error.hpp"

namespace biocopy {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kEmptySequence: return "empty-sequence";
    case ErrorCode::kEmptyCorpus: return "empty-corpus";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kConfigInfeasible: return "config-infeasible";
    case ErrorCode::kMalformedRecord: return "malformed-record";
    case ErrorCode::kMissingField: return "missing-field";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kWeightSum: return "weight-sum";
    case ErrorCode::kInvalidDistribution: return "invalid-distribution";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kInvalidTag: return "invalid-tag";
    case ErrorCode::kDisallowedToken: return "disallowed-token";
    case ErrorCode::kEmptySupport: return "empty-support";
  }
  return "unknown";
}

bool is_data_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTag:
    case ErrorCode::kDisallowedToken:
    case ErrorCode::kEmptySupport:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : Error(code, message, std::nullopt, std::nullopt) {}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line, std::optional<std::size_t> index)
    : std::runtime_error(message), code_(code), line_(line), index_(index) {}

Error Error::with_line(std::size_t line) const {
  return Error(code_, "line " + std::to_string(line) + ": " + what(), line,
               index_);
}

Error Error::with_index(std::size_t index) const {
  return Error(code_, "example " + std::to_string(index) + ": " + what(),
               line_, index);
}

Error Error::with_context(const std::string& prefix) const {
  return Error(code_, prefix + ": " + what(), line_, index_);
}

}  // namespace biocopy
