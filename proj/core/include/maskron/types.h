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

#ifndef MASKRON_TYPES_H_
#define MASKRON_TYPES_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace maskron {

// A PII category. Built-in names form a closed set; anything else must carry
// the CUSTOM: prefix.
class PiiType {
 public:
  static constexpr std::string_view kPhoneNumber = "PHONE_NUMBER";
  static constexpr std::string_view kEmail = "EMAIL";
  static constexpr std::string_view kSsn = "SSN";
  static constexpr std::string_view kCreditCard = "CREDIT_CARD";
  static constexpr std::string_view kPersonName = "PERSON_NAME";
  static constexpr std::string_view kIpAddress = "IP_ADDRESS";
  static constexpr std::string_view kCustomerId = "CUSTOMER_ID";

  // Throws Error(kBadPiiType) for names outside the built-in set that lack a
  // well-formed CUSTOM: prefix.
  static PiiType Parse(std::string_view name);
  static bool IsValidName(std::string_view name);
  static std::span<const std::string_view> BuiltinNames();

  PiiType() : name_(kPhoneNumber) {}

  const std::string& name() const { return name_; }
  bool is_custom() const { return name_.starts_with("CUSTOM:"); }

  friend bool operator==(const PiiType&, const PiiType&) = default;
  friend auto operator<=>(const PiiType&, const PiiType&) = default;

 private:
  explicit PiiType(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

// Half-open byte range [start, end) into UTF-8 text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

bool spans_overlap(const Span& a, const Span& b);

// True when `offset` does not split a UTF-8 multi-byte sequence.
bool IsCharBoundary(std::string_view text, std::size_t offset);

bool IsValidUtf8(std::string_view text);

// Checks start < end <= text.size() and that both ends sit on character
// boundaries. Throws Error(kBadSpan) otherwise.
void ValidateSpan(std::string_view text, const Span& span);

struct Detection {
  Span span;
  PiiType pii_type;
  double confidence = 0.0;
  std::string detector_id;
  std::string matched_text;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Builds a Detection whose matched_text is the slice of `text` at `span`.
// Validates the span and the confidence range.
Detection MakeDetection(std::string_view text, Span span, PiiType type,
                        double confidence, std::string detector_id);

enum class Strategy {
  kRedact,
  kPseudonymize,
  kHash,
  kEncrypt,
  kCustomEmail,
  kPassthrough,
};

std::string_view StrategyName(Strategy strategy);
// Accepts the upper-case names used in policy files. Throws
// Error(kUnknownStrategy).
Strategy ParseStrategy(std::string_view name);

struct PolicyEntry {
  Strategy strategy = Strategy::kRedact;
  std::map<std::string, std::string> params;
  std::optional<double> threshold_override;

  const std::string* param(const std::string& key) const;

  friend bool operator==(const PolicyEntry&, const PolicyEntry&) = default;
};

struct PolicyTable {
  double default_threshold = 0.5;
  // Applied to every type without an explicit entry. Never PASSTHROUGH.
  PolicyEntry fallback;
  std::map<PiiType, PolicyEntry> entries;

  const PolicyEntry& EntryFor(const PiiType& type) const;
  double ThresholdFor(const PiiType& type) const;

  // Everything to REDACT at the default threshold.
  static PolicyTable RedactAll();
};

// Identifiers available in the keyring, used to reject dangling references
// while validating a policy.
struct KnownSecrets {
  std::set<std::string> key_ids;
  std::set<std::string> salt_ids;
};

// Validates a policy tree of the form
//   {"default_threshold": 0.5,
//    "default_strategy": "REDACT" | {"strategy": ..., <params>},
//    "types": {"SSN": {"strategy": "HASH", "salt_id": "...",
//                      "threshold": 0.8}, ...}}
// Unknown top-level keys are ignored so the tree may carry sibling settings.
PolicyTable validate_policy(const nlohmann::json& raw,
                            const KnownSecrets& secrets);

struct AuditEntry {
  Span original_span;
  Span new_span;
  PiiType pii_type;
  Strategy strategy = Strategy::kRedact;
  std::string detector_id;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

struct MaskedDocument {
  std::string text;
  std::vector<AuditEntry> audit;
  std::map<PiiType, std::size_t> counts;
};

}  // namespace maskron

#endif  // MASKRON_TYPES_H_
