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

#include "maskron/regex_detector.h"

#include <algorithm>
#include <set>

#include <boost/regex.hpp>

#include "maskron/error.h"

namespace maskron {

struct RuleSet::CompiledRule {
  RegexRuleSource source;
  PiiType type;
  boost::regex regex;
  std::string detector_id;
};

namespace {

constexpr const char* kOctet = "(?:25[0-5]|2[0-4][0-9]|1[0-9][0-9]|[1-9]?[0-9])";

std::string DigitsOf(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c >= '0' && c <= '9') out.push_back(c);
  }
  return out;
}

bool ValidatorAccepts(Validator v, std::string_view match) {
  switch (v) {
    case Validator::kNone:
      return false;
    case Validator::kLuhn: {
      std::string digits = DigitsOf(match);
      if (digits.size() < 12 || digits.size() > 19) return false;
      return luhn_check(digits);
    }
  }
  return false;
}

}  // namespace

std::vector<RegexRuleSource> DefaultRegexRules() {
  std::string octet = kOctet;
  return {
      {"credit_card_v1", "CREDIT_CARD", R"([0-9]{16})", 0.30, Validator::kLuhn,
       0.85, true},
      // Both renderings of the US phone form ship: hyphenated and spaced.
      {"phone_us_v1", "PHONE_NUMBER", R"(\([0-9]{3}\) [0-9]{3}-[0-9]{4})", 0.90,
       Validator::kNone, std::nullopt, true},
      {"phone_us_space_v1", "PHONE_NUMBER", R"(\([0-9]{3}\) [0-9]{3} [0-9]{4})",
       0.90, Validator::kNone, std::nullopt, true},
      {"phone_us_dashed_v1", "PHONE_NUMBER", R"([0-9]{3}-[0-9]{3}-[0-9]{4})",
       0.90, Validator::kNone, std::nullopt, true},
      {"ssn_v1", "SSN", R"([0-9]{3}-[0-9]{2}-[0-9]{4})", 0.90, Validator::kNone,
       std::nullopt, true},
      {"email_v1", "EMAIL",
       R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})",
       0.95, Validator::kNone, std::nullopt, true},
      {"ipv4_v1", "IP_ADDRESS", octet + "(?:\\." + octet + "){3}", 0.90,
       Validator::kNone, std::nullopt, true},
  };
}

RuleSet RuleSet::Compile(const std::vector<RegexRuleSource>& sources) {
  auto rules = std::make_shared<std::vector<CompiledRule>>();
  rules->reserve(sources.size());
  std::set<std::string> seen;
  for (const RegexRuleSource& src : sources) {
    if (src.id.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "regex rule with empty id");
    }
    if (!seen.insert(src.id).second) {
      throw Error(ErrorCode::kDuplicateRuleId, src.id);
    }
    PiiType type = PiiType::Parse(src.pii_type);
    if (!(src.base_confidence >= 0.0 && src.base_confidence <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  src.id + ": base_confidence out of [0,1]");
    }
    if (src.validated_confidence) {
      double vc = *src.validated_confidence;
      if (!(vc >= 0.0 && vc <= 1.0) || vc <= src.base_confidence) {
        throw Error(ErrorCode::kInvalidArgument,
                    src.id + ": validated_confidence must lie in (base, 1]");
      }
    }
    if (src.validator != Validator::kNone && !src.validated_confidence) {
      throw Error(ErrorCode::kInvalidArgument,
                  src.id + ": validator requires validated_confidence");
    }
    std::string pattern = src.pattern;
    if (src.word_boundaries) {
      pattern = "(?<![A-Za-z0-9_])(?:" + pattern + ")(?![A-Za-z0-9_])";
    }
    try {
      rules->push_back(CompiledRule{src, std::move(type),
                                    boost::regex(pattern, boost::regex::perl),
                                    "regex:" + src.id});
    } catch (const boost::regex_error& e) {
      throw Error(ErrorCode::kBadPattern, src.id + ": " + e.what());
    }
  }
  RuleSet set;
  set.rules_ = std::move(rules);
  return set;
}

std::size_t RuleSet::size() const { return rules_ ? rules_->size() : 0; }

const RegexRuleSource& RuleSet::source(std::size_t i) const {
  return rules_->at(i).source;
}

std::vector<Detection> scan_regex(std::string_view text, const RuleSet& rules) {
  std::vector<Detection> out;
  if (text.empty() || rules.size() == 0) return out;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  for (const auto& rule : rules.rules()) {
    boost::cregex_iterator it(begin, end, rule.regex,
                              boost::match_posix | boost::match_not_null);
    for (; it != boost::cregex_iterator(); ++it) {
      const auto& m = (*it)[0];
      Span span{static_cast<std::size_t>(m.first - begin),
                static_cast<std::size_t>(m.second - begin)};
      // Patterns are byte-oriented; a match that cuts a UTF-8 sequence is not
      // a valid detection.
      if (!IsCharBoundary(text, span.start) || !IsCharBoundary(text, span.end)) {
        continue;
      }
      std::string_view matched = text.substr(span.start, span.length());
      double confidence = rule.source.base_confidence;
      if (ValidatorAccepts(rule.source.validator, matched)) {
        confidence = *rule.source.validated_confidence;
      }
      out.push_back(Detection{span, rule.type, confidence, rule.detector_id,
                              std::string(matched)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Detection& a, const Detection& b) { return a.span < b.span; });
  return out;
}

bool luhn_check(std::string_view digits) {
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kNotDigits, "'" + std::string(digits) + "'");
    }
  }
  if (digits.size() < 12 || digits.size() > 19) {
    throw Error(ErrorCode::kInvalidArgument,
                "luhn_check expects 12-19 digits, got " +
                    std::to_string(digits.size()));
  }
  int sum = 0;
  bool double_it = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int d = *it - '0';
    if (double_it) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    double_it = !double_it;
  }
  return sum % 10 == 0;
}

}  // namespace maskron
