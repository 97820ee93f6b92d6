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

#ifndef MASKRON_REGEX_DETECTOR_H_
#define MASKRON_REGEX_DETECTOR_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maskron/types.h"

namespace maskron {

enum class Validator { kNone, kLuhn };

// Uncompiled rule as it appears in configuration.
struct RegexRuleSource {
  std::string id;
  std::string pii_type;
  std::string pattern;
  double base_confidence = 0.5;
  Validator validator = Validator::kNone;
  // Confidence assigned when the validator accepts the match. Must exceed
  // base_confidence.
  std::optional<double> validated_confidence;
  // Require the match to be neither preceded nor followed by [A-Za-z0-9_].
  bool word_boundaries = true;
};

// The embedded rule tiers: credit card (Luhn-promoted), three US phone forms,
// SSN, email and IPv4.
std::vector<RegexRuleSource> DefaultRegexRules();

// Immutable compiled rule list. Cheap to copy; copies share the compiled
// automata and may be scanned from any number of threads.
class RuleSet {
 public:
  struct CompiledRule;

  // Throws Error(kBadPattern) or Error(kDuplicateRuleId).
  static RuleSet Compile(const std::vector<RegexRuleSource>& sources);

  std::size_t size() const;
  const RegexRuleSource& source(std::size_t i) const;
  const std::vector<CompiledRule>& rules() const { return *rules_; }

 private:
  std::shared_ptr<const std::vector<CompiledRule>> rules_;
};

inline RuleSet compile_ruleset(const std::vector<RegexRuleSource>& sources) {
  return RuleSet::Compile(sources);
}

// Runs every rule over `text`. Matches are leftmost-longest and
// non-overlapping within a rule; matches of different rules may overlap.
// Results are ordered by span, ties in rule order.
std::vector<Detection> scan_regex(std::string_view text, const RuleSet& rules);

// Luhn checksum over 12 to 19 ASCII digits. Throws Error(kNotDigits) on any
// non-digit and Error(kInvalidArgument) on a length outside that range.
bool luhn_check(std::string_view digits);

}  // namespace maskron

#endif  // MASKRON_REGEX_DETECTOR_H_
