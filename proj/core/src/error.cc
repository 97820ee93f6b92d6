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

#include "maskron/error.h"

namespace maskron {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kBadPiiType: return "BadPiiType";
    case ErrorCode::kBadSpan: return "BadSpan";
    case ErrorCode::kUnknownStrategy: return "UnknownStrategy";
    case ErrorCode::kMissingParam: return "MissingParam";
    case ErrorCode::kBadThreshold: return "BadThreshold";
    case ErrorCode::kDanglingKeyRef: return "DanglingKeyRef";
    case ErrorCode::kBadPattern: return "BadPattern";
    case ErrorCode::kDuplicateRuleId: return "DuplicateRuleId";
    case ErrorCode::kNotDigits: return "NotDigits";
    case ErrorCode::kBadParameter: return "BadParameter";
    case ErrorCode::kEmptyDictionary: return "EmptyDictionary";
    case ErrorCode::kCorruptFormat: return "CorruptFormat";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kBadResponse: return "BadResponse";
    case ErrorCode::kAuthFailed: return "AuthFailed";
    case ErrorCode::kBoundaryNotAcknowledged: return "BoundaryNotAcknowledged";
    case ErrorCode::kMixedSources: return "MixedSources";
    case ErrorCode::kMissingKey: return "MissingKey";
    case ErrorCode::kWeakSalt: return "WeakSalt";
    case ErrorCode::kNotAnEmail: return "NotAnEmail";
    case ErrorCode::kNothingToPseudonymize: return "NothingToPseudonymize";
    case ErrorCode::kEntropyUnavailable: return "EntropyUnavailable";
    case ErrorCode::kCryptoFailure: return "CryptoFailure";
    case ErrorCode::kMaskFailed: return "MaskFailed";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

}  // namespace maskron
