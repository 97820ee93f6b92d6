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

#include "maskron/config.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "maskron/config_text.h"
#include "maskron/error.h"
#include "support/test_util.h"

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

TEST(ConfigTextTest, TablesKeysAndValues) {
  json j = ParseConfigText(R"(
# leading comment
top = "a\tbé"   # trailing comment
[input]
format = 'ndjson'
fields = ["user.email",
          "msg",]   # multi-line, trailing comma
[policy.types."CUSTOM:EMP_ID"]
strategy = "HASH"
threshold = 0.75
n = -3
big = 1e3
on = true
[[detectors.dictionary]]
name = "a"
[[detectors.dictionary]]
name = "b"
a.b.c = 1
)");
  EXPECT_EQ(j["top"], "a\tb\xc3\xa9");
  EXPECT_EQ(j["input"]["format"], "ndjson");
  EXPECT_EQ(j["input"]["fields"], json({"user.email", "msg"}));
  const json& emp = j["policy"]["types"]["CUSTOM:EMP_ID"];
  EXPECT_EQ(emp["strategy"], "HASH");
  EXPECT_DOUBLE_EQ(emp["threshold"].get<double>(), 0.75);
  EXPECT_EQ(emp["n"], -3);
  EXPECT_TRUE(emp["n"].is_number_integer());
  EXPECT_DOUBLE_EQ(emp["big"].get<double>(), 1000.0);
  EXPECT_EQ(emp["on"], true);
  ASSERT_EQ(j["detectors"]["dictionary"].size(), 2u);
  EXPECT_EQ(j["detectors"]["dictionary"][1]["name"], "b");
  EXPECT_EQ(j["detectors"]["dictionary"][1]["a"]["b"]["c"], 1);
}

TEST(ConfigTextTest, Errors) {
  auto code = [](std::string text) { return CodeOf([&] { ParseConfigText(text); }); };
  EXPECT_EQ(code("a = 1\na = 2\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("[t]\n[t]\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("a = \"open\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("a = [1, 2\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("= 1\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("a = nope\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("a = 1 b = 2\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("a = 1\n[a]\n"), ErrorCode::kParseError);
  try {
    ParseConfigText("ok = 1\n\nbad\n");
  } catch (const Error& e) {
    EXPECT_NE(e.message().find("line 3"), std::string::npos) << e.message();
  }
}

TEST(ConfigTest, DefaultsWhenEmpty) {
  Config c = ParseConfig("", ".", {.use_environment = false});
  EXPECT_EQ(c.input.format, InputFormat::kTextLines);
  EXPECT_EQ(c.parallelism, 1u);
  EXPECT_EQ(c.regex_rules.size(), DefaultRegexRules().size());
  EXPECT_EQ(c.policy.EntryFor(PiiType::Parse("SSN")).strategy, Strategy::kRedact);
  EXPECT_TRUE(c.keyring->empty());
}

TEST(ConfigTest, FullConfigWithRelativePaths) {
  testing::TempDir dir;
  testing::FixedKeyring().Save(dir / "ring");
  testing::WriteFile(dir / "names.txt", "alice\nbob\n");
  testing::WriteFile(dir / "maskron.toml", R"(
[input]
format = "csv"
columns = ["note", "email"]

[pipeline]
parallelism = 4
queue_depth = 16
keyring = "ring"
metrics = "out/metrics.json"

[detectors.regex]
[[detectors.regex.rules]]
id = "employee_id_v1"
type = "CUSTOM:EMPLOYEE_ID"
pattern = "E-[0-9]{6}"
confidence = 0.9

[[detectors.dictionary]]
name = "first_names"
source = "names.txt"
fpr = 0.001

[[detectors.external]]
name = "ner"
url = "http://127.0.0.1:9/detect"
external_data_leaves_boundary = true

[policy]
default_threshold = 0.6
precedence = ["regex", "external", "bloom"]

[policy.types.SSN]
strategy = "HASH"
salt_id = "s1"

[policy.types."CUSTOM:EMPLOYEE_ID"]
strategy = "PSEUDONYMIZE"
key_id = "k1"
)");
  Config c = load_config(dir / "maskron.toml", {.use_environment = false});
  EXPECT_EQ(c.input.format, InputFormat::kCsv);
  EXPECT_EQ(c.parallelism, 4u);
  EXPECT_EQ(c.queue_depth, 16u);
  EXPECT_EQ(*c.metrics_path, dir / "out/metrics.json");
  EXPECT_NE(c.keyring->key("k1"), nullptr);
  EXPECT_EQ(c.regex_rules.size(), DefaultRegexRules().size() + 1);
  ASSERT_EQ(c.dictionaries.size(), 1u);
  EXPECT_TRUE(c.dictionaries[0]->filter().MightContain("alice"));
  ASSERT_EQ(c.external.size(), 1u);
  EXPECT_TRUE(c.external[0].data_leaves_boundary);
  EXPECT_EQ(c.precedence, (Precedence{"regex", "external", "bloom"}));
  EXPECT_EQ(c.policy.EntryFor(PiiType::Parse("CUSTOM:EMPLOYEE_ID")).strategy,
            Strategy::kPseudonymize);
  EXPECT_DOUBLE_EQ(c.policy.default_threshold, 0.6);
}

TEST(ConfigTest, BuiltinRuleCanBeReplaced) {
  Config c = ParseConfig(R"(
[detectors.regex]
[[detectors.regex.rules]]
id = "ssn_v1"
type = "SSN"
pattern = "[0-9]{9}"
confidence = 0.7
)",
                         ".", {.use_environment = false});
  EXPECT_EQ(c.regex_rules.size(), DefaultRegexRules().size());
}

TEST(ConfigTest, Rejections) {
  LoadOptions opts{.use_environment = false};
  auto code = [&](std::string text) { return CodeOf([&] { ParseConfig(text, ".", opts); }); };
  EXPECT_EQ(code("[input]\nformat = \"ndjson\"\n"), ErrorCode::kValidationError);
  EXPECT_EQ(code("[input]\nformat = \"xml\"\n"), ErrorCode::kValidationError);
  EXPECT_EQ(code("[inptu]\n"), ErrorCode::kValidationError);
  EXPECT_EQ(code("[pipeline]\nparallelism = 0\n"), ErrorCode::kValidationError);
  EXPECT_EQ(code("[pipeline]\nkeyring = \"/nonexistent/ring\"\n"), ErrorCode::kValidationError);
  EXPECT_EQ(code("[policy.types.SSN]\nstrategy = \"ENCRYPT\"\nkey_id = \"k1\"\n"),
            ErrorCode::kDanglingKeyRef);
  EXPECT_EQ(code("[[detectors.external]]\nname = \"m\"\nurl = \"http://h/\"\n"),
            ErrorCode::kValidationError);
  EXPECT_EQ(code("[[detectors.dictionary]]\nname = \"d\"\nsource = \"/nonexistent\"\n"),
            ErrorCode::kValidationError);
  EXPECT_EQ(code("[[detectors.regex.rules]]\nid = \"x\"\ntype = \"SSN\"\npattern = \"(\"\n"),
            ErrorCode::kBadPattern);
  EXPECT_EQ(CodeOf([] { load_config("/nonexistent/maskron.toml"); }), ErrorCode::kIoError);
}

TEST(ConfigTest, KeyringFromEnvironmentAndOverride) {
  testing::TempDir dir;
  testing::FixedKeyring().Save(dir / "ring");
  ::setenv(kKeyringEnvVar, (dir / "ring").c_str(), 1);
  Config from_env = ParseConfig("", ".");
  EXPECT_NE(from_env.keyring->key("k1"), nullptr);
  Config ignored = ParseConfig("", ".", {.use_environment = false});
  EXPECT_TRUE(ignored.keyring->empty());
  ::unsetenv(kKeyringEnvVar);
  Config overridden = ParseConfig("", ".", {.keyring_override = dir / "ring"});
  EXPECT_NE(overridden.keyring->salt("s1"), nullptr);
}

}  // namespace
}  // namespace maskron
