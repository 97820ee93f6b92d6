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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "maskron/error.h"

namespace maskron {
namespace {

using nlohmann::json;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(PiiTypeTest, BuiltinsAndCustom) {
  for (std::string_view name : PiiType::BuiltinNames()) {
    EXPECT_EQ(PiiType::Parse(name).name(), name);
  }
  EXPECT_TRUE(PiiType::Parse("CUSTOM:EMPLOYEE_ID").is_custom());
  EXPECT_FALSE(PiiType::Parse("SSN").is_custom());
  EXPECT_EQ(CodeOf([] { PiiType::Parse("EMPLOYEE_ID"); }), ErrorCode::kBadPiiType);
  EXPECT_EQ(CodeOf([] { PiiType::Parse("CUSTOM:"); }), ErrorCode::kBadPiiType);
  EXPECT_EQ(CodeOf([] { PiiType::Parse("CUSTOM:lower"); }), ErrorCode::kBadPiiType);
  EXPECT_EQ(CodeOf([] { PiiType::Parse("email"); }), ErrorCode::kBadPiiType);
}

TEST(SpanTest, Overlap) {
  EXPECT_TRUE(spans_overlap({0, 5}, {4, 6}));
  EXPECT_FALSE(spans_overlap({0, 5}, {5, 6}));
  EXPECT_TRUE(spans_overlap({2, 3}, {0, 10}));
  EXPECT_FALSE(spans_overlap({7, 9}, {0, 7}));
}

TEST(SpanTest, Validation) {
  const std::string text = "caf\xc3\xa9!";  // "café!"
  EXPECT_NO_THROW(ValidateSpan(text, {0, 5}));
  EXPECT_NO_THROW(ValidateSpan(text, {3, 6}));
  EXPECT_EQ(CodeOf([&] { ValidateSpan(text, {0, 4}); }), ErrorCode::kBadSpan);
  EXPECT_EQ(CodeOf([&] { ValidateSpan(text, {2, 2}); }), ErrorCode::kBadSpan);
  EXPECT_EQ(CodeOf([&] { ValidateSpan(text, {5, 7}); }), ErrorCode::kBadSpan);
  EXPECT_TRUE(IsValidUtf8(text));
  EXPECT_FALSE(IsValidUtf8("\xc3"));
  EXPECT_FALSE(IsValidUtf8("\xff"));
}

TEST(DetectionTest, MakeDetectionSlicesText) {
  Detection d = MakeDetection("hi Alice", {3, 8}, PiiType::Parse("PERSON_NAME"), 0.97, "x");
  EXPECT_EQ(d.matched_text, "Alice");
  EXPECT_EQ(CodeOf([] { MakeDetection("abc", {0, 2}, PiiType{}, 1.5, "x"); }),
            ErrorCode::kInvalidArgument);
}

TEST(StrategyTest, NamesRoundTrip) {
  for (Strategy s : {Strategy::kRedact, Strategy::kPseudonymize, Strategy::kHash,
                     Strategy::kEncrypt, Strategy::kCustomEmail, Strategy::kPassthrough}) {
    EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  }
  EXPECT_EQ(CodeOf([] { ParseStrategy("SCRAMBLE"); }), ErrorCode::kUnknownStrategy);
}

class PolicyTest : public ::testing::Test {
 protected:
  KnownSecrets secrets_{{"k1"}, {"s1"}};
};

TEST_F(PolicyTest, EmptyPolicyRedactsEverything) {
  PolicyTable table = validate_policy(json::object(), secrets_);
  EXPECT_EQ(table.default_threshold, 0.5);
  EXPECT_EQ(table.EntryFor(PiiType::Parse("SSN")).strategy, Strategy::kRedact);
}

TEST_F(PolicyTest, PerTypeEntries) {
  json raw = {{"default_threshold", 0.6},
              {"types",
               {{"SSN", {{"strategy", "HASH"}, {"salt_id", "s1"}, {"threshold", 0.9}}},
                {"EMAIL", "CUSTOM_EMAIL"},
                {"PHONE_NUMBER", {{"strategy", "PSEUDONYMIZE"}, {"key_id", "k1"}}},
                {"CUSTOM:TICKET", "PASSTHROUGH"}}}};
  PolicyTable table = validate_policy(raw, secrets_);
  EXPECT_EQ(table.ThresholdFor(PiiType::Parse("SSN")), 0.9);
  EXPECT_EQ(table.ThresholdFor(PiiType::Parse("EMAIL")), 0.6);
  EXPECT_EQ(*table.EntryFor(PiiType::Parse("EMAIL")).param("length"), "match");
  EXPECT_EQ(*table.EntryFor(PiiType::Parse("EMAIL")).param("fill_char"), "x");
  EXPECT_EQ(*table.EntryFor(PiiType::Parse("PHONE_NUMBER")).param("mode"), "deterministic");
  EXPECT_EQ(table.EntryFor(PiiType::Parse("CUSTOM:TICKET")).strategy, Strategy::kPassthrough);
  EXPECT_EQ(table.EntryFor(PiiType::Parse("IP_ADDRESS")).strategy, Strategy::kRedact);
}

TEST_F(PolicyTest, Rejections) {
  EXPECT_EQ(CodeOf([&] { validate_policy({{"types", {{"SSN", "HASH"}}}}, secrets_); }),
            ErrorCode::kMissingParam);
  EXPECT_EQ(CodeOf([&] {
              validate_policy({{"types", {{"SSN", {{"strategy", "HASH"}, {"salt_id", "nope"}}}}}},
                              secrets_);
            }),
            ErrorCode::kDanglingKeyRef);
  EXPECT_EQ(CodeOf([&] {
              validate_policy({{"types", {{"SSN", {{"strategy", "ENCRYPT"}, {"key_id", "k9"}}}}}},
                              secrets_);
            }),
            ErrorCode::kDanglingKeyRef);
  EXPECT_EQ(CodeOf([&] { validate_policy({{"default_threshold", 1.5}}, secrets_); }),
            ErrorCode::kBadThreshold);
  EXPECT_EQ(CodeOf([&] { validate_policy({{"types", {{"SSN", "SHRED"}}}}, secrets_); }),
            ErrorCode::kUnknownStrategy);
  EXPECT_EQ(CodeOf([&] { validate_policy({{"types", {{"FAX", "REDACT"}}}}, secrets_); }),
            ErrorCode::kBadPiiType);
  EXPECT_EQ(CodeOf([&] { validate_policy({{"default_strategy", "PASSTHROUGH"}}, secrets_); }),
            ErrorCode::kValidationError);
  EXPECT_EQ(CodeOf([&] {
              validate_policy(
                  {{"types", {{"EMAIL", {{"strategy", "CUSTOM_EMAIL"}, {"fill_char", "@"}}}}}},
                  secrets_);
            }),
            ErrorCode::kValidationError);
}

TEST_F(PolicyTest, RandomPseudonymsNeedNoKey) {
  PolicyTable table = validate_policy(
      {{"types", {{"PHONE_NUMBER", {{"strategy", "PSEUDONYMIZE"}, {"mode", "random"}}}}}},
      KnownSecrets{});
  EXPECT_EQ(*table.EntryFor(PiiType::Parse("PHONE_NUMBER")).param("mode"), "random");
}

}  // namespace
}  // namespace maskron
