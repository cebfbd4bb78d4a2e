/* Copyright 2026 The mgtscope Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "mgtscope/error.hpp"

namespace mgt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileMissing: return "file-missing";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kEmptyText: return "empty-text";
    case ErrorCode::kZeroWords: return "zero-words";
    case ErrorCode::kEmptyTags: return "empty-tags";
    case ErrorCode::kEmptyTrace: return "empty-trace";
    case ErrorCode::kInvalidBuckets: return "invalid-buckets";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kMissingMoments: return "missing-moments";
    case ErrorCode::kZeroVariance: return "zero-variance";
    case ErrorCode::kTooShortInput: return "too-short-input";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kEmptyList: return "empty-list";
    case ErrorCode::kZeroNorm: return "zero-norm-vector";
    case ErrorCode::kSingleClass: return "single-class";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kSchemaMismatch: return "schema-mismatch";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kUnknownLabel: return "unknown-label";
    case ErrorCode::kMissingPrediction: return "missing-prediction";
    case ErrorCode::kInsufficientClasses: return "insufficient-classes";
    case ErrorCode::kClassTooSmall: return "class-too-small";
    case ErrorCode::kEmptyClass: return "empty-class";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace mgt
