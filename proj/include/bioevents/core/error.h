// Copyright 2026 The bioevents Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIOEVENTS_CORE_ERROR_H_
#define BIOEVENTS_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bioevents {

// Every failure the toolkit raises carries one of these codes. The CLI maps
// them onto its frozen exit-code table.
enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kValidation,
  kIo,
  kUndefined,
  kNotNormalized,
  kInsufficientData,
  kNoPersonEntity,
  kLengthMismatch,
  kTokenizationMismatch,
  kRebuildRequired,
  kMissingField,
  kNotFound,
  kNetwork,
  kSchemaChange,
  kEmptyGroup,
  kEmptySupport,
  kClassifier,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_ERROR_H_
