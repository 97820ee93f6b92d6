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

#include "maskron/types.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "maskron/error.h"

namespace maskron {
namespace {

constexpr std::array<std::string_view, 7> kBuiltinNames = {
    PiiType::kPhoneNumber, PiiType::kEmail,     PiiType::kSsn,
    PiiType::kCreditCard,  PiiType::kPersonName, PiiType::kIpAddress,
    PiiType::kCustomerId,
};

constexpr std::string_view kCustomPrefix = "CUSTOM:";

bool IsUpperOrDigitOrUnderscore(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

void CheckThreshold(double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw Error(ErrorCode::kBadThreshold, std::to_string(value));
  }
}

double ReadNumber(const nlohmann::json& node, const std::string& what) {
  if (!node.is_number()) {
    throw Error(ErrorCode::kBadThreshold, what + " is not a number");
  }
  return node.get<double>();
}

std::string ParamToString(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  return value.dump();
}

void RequireParam(const PolicyEntry& entry, const std::string& name) {
  if (entry.param(name) == nullptr || entry.param(name)->empty()) {
    throw Error(ErrorCode::kMissingParam,
                std::string(StrategyName(entry.strategy)) + " requires " + name);
  }
}

void CheckParams(PolicyEntry& entry, const KnownSecrets& secrets) {
  switch (entry.strategy) {
    case Strategy::kHash: {
      RequireParam(entry, "salt_id");
      const std::string& salt_id = *entry.param("salt_id");
      if (!secrets.salt_ids.contains(salt_id)) {
        throw Error(ErrorCode::kDanglingKeyRef, "salt_id " + salt_id);
      }
      if (const auto* full = entry.param("full_digest");
          full != nullptr && *full != "true" && *full != "false") {
        throw Error(ErrorCode::kValidationError,
                    "full_digest must be true or false");
      }
      break;
    }
    case Strategy::kEncrypt: {
      RequireParam(entry, "key_id");
      const std::string& key_id = *entry.param("key_id");
      if (!secrets.key_ids.contains(key_id)) {
        throw Error(ErrorCode::kDanglingKeyRef, "key_id " + key_id);
      }
      break;
    }
    case Strategy::kPseudonymize: {
      if (entry.param("mode") == nullptr) entry.params["mode"] = "deterministic";
      const std::string& mode = *entry.param("mode");
      if (mode == "deterministic") {
        RequireParam(entry, "key_id");
        const std::string& key_id = *entry.param("key_id");
        if (!secrets.key_ids.contains(key_id)) {
          throw Error(ErrorCode::kDanglingKeyRef, "key_id " + key_id);
        }
      } else if (mode != "random") {
        throw Error(ErrorCode::kValidationError,
                    "pseudonymize mode must be deterministic or random, got " +
                        mode);
      }
      break;
    }
    case Strategy::kCustomEmail: {
      if (entry.param("fill_char") == nullptr) entry.params["fill_char"] = "x";
      const std::string& fill = *entry.param("fill_char");
      if (fill.size() != 1 || fill[0] == '@' ||
          static_cast<unsigned char>(fill[0]) >= 0x80) {
        throw Error(ErrorCode::kValidationError,
                    "fill_char must be a single ASCII character other than @");
      }
      if (entry.param("length") == nullptr) entry.params["length"] = "match";
      const std::string& length = *entry.param("length");
      if (length != "match") {
        bool ok = !length.empty() && length.size() < 6 &&
                  std::all_of(length.begin(), length.end(),
                              [](char c) { return c >= '0' && c <= '9'; });
        if (!ok || std::stoi(length) < 1) {
          throw Error(ErrorCode::kValidationError,
                      "length must be \"match\" or a positive integer");
        }
      }
      break;
    }
    case Strategy::kRedact:
    case Strategy::kPassthrough:
      break;
  }
}

PolicyEntry ParseEntry(const nlohmann::json& node, const KnownSecrets& secrets) {
  PolicyEntry entry;
  if (node.is_string()) {
    entry.strategy = ParseStrategy(node.get<std::string>());
  } else if (node.is_object()) {
    auto it = node.find("strategy");
    if (it == node.end() || !it->is_string()) {
      throw Error(ErrorCode::kUnknownStrategy, "entry has no strategy");
    }
    entry.strategy = ParseStrategy(it->get<std::string>());
    for (const auto& [key, value] : node.items()) {
      if (key == "strategy") continue;
      if (key == "threshold") {
        double t = ReadNumber(value, "threshold");
        CheckThreshold(t);
        entry.threshold_override = t;
        continue;
      }
      entry.params[key] = ParamToString(value);
    }
  } else {
    throw Error(ErrorCode::kUnknownStrategy, "entry must be a string or table");
  }
  CheckParams(entry, secrets);
  return entry;
}

}  // namespace

PiiType PiiType::Parse(std::string_view name) {
  if (!IsValidName(name)) {
    throw Error(ErrorCode::kBadPiiType, "'" + std::string(name) + "'");
  }
  return PiiType(std::string(name));
}

bool PiiType::IsValidName(std::string_view name) {
  if (name.starts_with(kCustomPrefix)) {
    std::string_view suffix = name.substr(kCustomPrefix.size());
    return !suffix.empty() &&
           std::all_of(suffix.begin(), suffix.end(), IsUpperOrDigitOrUnderscore);
  }
  return std::find(kBuiltinNames.begin(), kBuiltinNames.end(), name) !=
         kBuiltinNames.end();
}

std::span<const std::string_view> PiiType::BuiltinNames() {
  return kBuiltinNames;
}

bool spans_overlap(const Span& a, const Span& b) {
  return a.start < b.end && b.start < a.end;
}

bool IsCharBoundary(std::string_view text, std::size_t offset) {
  if (offset == 0 || offset == text.size()) return true;
  if (offset > text.size()) return false;
  return (static_cast<unsigned char>(text[offset]) & 0xC0) != 0x80;
}

bool IsValidUtf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > text.size()) return false;
    for (std::size_t j = 1; j < len; ++j) {
      auto cc = static_cast<unsigned char>(text[i + j]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Reject overlong forms, surrogates and values past U+10FFFF.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

void ValidateSpan(std::string_view text, const Span& span) {
  if (span.start >= span.end) {
    throw Error(ErrorCode::kBadSpan, "empty or inverted span [" +
                                         std::to_string(span.start) + "," +
                                         std::to_string(span.end) + ")");
  }
  if (span.end > text.size()) {
    throw Error(ErrorCode::kBadSpan,
                "span end " + std::to_string(span.end) + " past text length " +
                    std::to_string(text.size()));
  }
  if (!IsCharBoundary(text, span.start) || !IsCharBoundary(text, span.end)) {
    throw Error(ErrorCode::kBadSpan, "span splits a UTF-8 character");
  }
}

Detection MakeDetection(std::string_view text, Span span, PiiType type,
                        double confidence, std::string detector_id) {
  ValidateSpan(text, span);
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "confidence out of [0,1]: " + std::to_string(confidence));
  }
  return Detection{span, std::move(type), confidence, std::move(detector_id),
                   std::string(text.substr(span.start, span.length()))};
}

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRedact: return "REDACT";
    case Strategy::kPseudonymize: return "PSEUDONYMIZE";
    case Strategy::kHash: return "HASH";
    case Strategy::kEncrypt: return "ENCRYPT";
    case Strategy::kCustomEmail: return "CUSTOM_EMAIL";
    case Strategy::kPassthrough: return "PASSTHROUGH";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kRedact, Strategy::kPseudonymize, Strategy::kHash,
                     Strategy::kEncrypt, Strategy::kCustomEmail,
                     Strategy::kPassthrough}) {
    if (StrategyName(s) == name) return s;
  }
  throw Error(ErrorCode::kUnknownStrategy, "'" + std::string(name) + "'");
}

const std::string* PolicyEntry::param(const std::string& key) const {
  auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

const PolicyEntry& PolicyTable::EntryFor(const PiiType& type) const {
  auto it = entries.find(type);
  return it == entries.end() ? fallback : it->second;
}

double PolicyTable::ThresholdFor(const PiiType& type) const {
  auto it = entries.find(type);
  if (it != entries.end() && it->second.threshold_override) {
    return *it->second.threshold_override;
  }
  return default_threshold;
}

PolicyTable PolicyTable::RedactAll() { return PolicyTable{}; }

PolicyTable validate_policy(const nlohmann::json& raw,
                            const KnownSecrets& secrets) {
  if (!raw.is_null() && !raw.is_object()) {
    throw Error(ErrorCode::kValidationError, "policy must be a table");
  }
  PolicyTable table;
  if (raw.is_null()) return table;

  if (auto it = raw.find("default_threshold"); it != raw.end()) {
    table.default_threshold = ReadNumber(*it, "default_threshold");
    CheckThreshold(table.default_threshold);
  }
  if (auto it = raw.find("default_strategy"); it != raw.end()) {
    table.fallback = ParseEntry(*it, secrets);
    if (table.fallback.strategy == Strategy::kPassthrough) {
      throw Error(ErrorCode::kValidationError,
                  "default_strategy may not be PASSTHROUGH; list types "
                  "explicitly instead");
    }
    if (table.fallback.threshold_override) {
      throw Error(ErrorCode::kValidationError,
                  "default_strategy takes no threshold; use default_threshold");
    }
  }
  if (auto it = raw.find("types"); it != raw.end()) {
    if (!it->is_object()) {
      throw Error(ErrorCode::kValidationError, "policy.types must be a table");
    }
    for (const auto& [name, node] : it->items()) {
      table.entries.emplace(PiiType::Parse(name), ParseEntry(node, secrets));
    }
  }
  return table;
}

}  // namespace maskron
