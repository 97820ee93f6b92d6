// Copyright 2026 The Maskron Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MASKRON_ERROR_H_
#define MASKRON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace maskron {

// Every failure the library reports carries one of these codes. Callers that
// need to branch on the failure kind should switch on Error::code() rather
// than parse messages.
enum class ErrorCode {
  kInvalidArgument,
  kBadPiiType,
  kBadSpan,
  // Policy validation.
  kUnknownStrategy,
  kMissingParam,
  kBadThreshold,
  kDanglingKeyRef,
  // Regex rules.
  kBadPattern,
  kDuplicateRuleId,
  kNotDigits,
  // Bloom filters and dictionaries.
  kBadParameter,
  kEmptyDictionary,
  kCorruptFormat,
  kIoError,
  // External detectors.
  kTimeout,
  kUnreachable,
  kBadResponse,
  kAuthFailed,
  kBoundaryNotAcknowledged,
  // Span resolution.
  kMixedSources,
  // Masking.
  kMissingKey,
  kWeakSalt,
  kNotAnEmail,
  kNothingToPseudonymize,
  kEntropyUnavailable,
  kCryptoFailure,
  kMaskFailed,
  // Configuration and corpora.
  kParseError,
  kValidationError,
  kLengthMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace maskron

#endif  // MASKRON_ERROR_H_
