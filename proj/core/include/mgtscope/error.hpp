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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mgt {

enum class ErrorCode {
  kFileMissing,
  kSchemaViolation,
  kDuplicateId,
  kInvalidArgument,
  kEmptyText,
  kZeroWords,
  kEmptyTags,
  kEmptyTrace,
  kInvalidBuckets,
  kDegenerate,        // e.g. LRR with every rank equal to 1
  kMissingMoments,
  kZeroVariance,
  kTooShortInput,
  kDimensionMismatch,
  kEmptyList,
  kZeroNorm,
  kSingleClass,
  kNonFinite,
  kSchemaMismatch,
  kLengthMismatch,
  kUnknownLabel,
  kMissingPrediction,
  kInsufficientClasses,
  kClassTooSmall,
  kEmptyClass,
  kDivergence,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A per-line problem found while reading a JSONL input. Loaders collect these
// instead of aborting so that one bad record does not hide the rest.
struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

}  // namespace mgt
