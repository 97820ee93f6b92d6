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

#include "maskron/pipeline.h"

#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "maskron/error.h"
#include "maskron/eval.h"
#include "maskron/masking.h"
#include "maskron/records.h"
#include "support/fake_detector_server.h"
#include "support/test_util.h"

namespace maskron {
namespace {

using nlohmann::json;

std::string Upper(std::string_view, std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

TEST(RecordReaderTest, KeepsTerminators) {
  std::istringstream in("a\r\nb\n\nc");
  RecordReader reader(in, InputFormat::kTextLines);
  std::vector<std::pair<std::string, std::string>> got;
  while (auto r = reader.Next()) got.emplace_back(r->body, r->terminator);
  EXPECT_EQ(got, (std::vector<std::pair<std::string, std::string>>{
                     {"a", "\r\n"}, {"b", "\n"}, {"", "\n"}, {"c", ""}}));
}

TEST(RecordReaderTest, CsvRecordsSpanQuotedNewlines) {
  std::istringstream in("id,note\n1,\"two\nlines\"\n2,x\n");
  RecordReader reader(in, InputFormat::kCsv);
  std::vector<std::string> bodies;
  while (auto r = reader.Next()) bodies.push_back(r->body);
  EXPECT_EQ(bodies, (std::vector<std::string>{"id,note", "1,\"two\nlines\"", "2,x"}));
  EXPECT_EQ(ParseCsvRecord(bodies[1]), (std::vector<std::string>{"1", "two\nlines"}));
}

TEST(RewriteRecordTest, NdjsonTouchesOnlyConfiguredStrings) {
  InputConfig cfg{InputFormat::kNdjson, {"msg", "user.email", "tags"}, {}, true};
  std::string body =
      R"({"msg": "hi",  "n": 1, "user": {"email": "a@b.io", "id": "x"}, "tags": ["p", 2, "q"],)"
      R"( "other": "keep"})";
  std::string out = RewriteRecord(body, cfg, {}, Upper);
  EXPECT_EQ(out,
            R"({"msg": "HI",  "n": 1, "user": {"email": "A@B.IO", "id": "x"}, "tags": ["P", 2, "Q"],)"
            R"( "other": "keep"})");
  EXPECT_EQ(RewriteRecord(body, cfg, {}, [](auto, auto t) { return std::string(t); }), body);
}

TEST(RewriteRecordTest, NdjsonEscapesReplacements) {
  InputConfig cfg{InputFormat::kNdjson, {"msg"}, {}, true};
  std::string out = RewriteRecord(R"({"msg":"xA"})", cfg, {},
                                  [](auto, auto t) { return std::string(t) + "\"\n"; });
  EXPECT_EQ(json::parse(out)["msg"], "xA\"\n");
  EXPECT_THROW(RewriteRecord("{not json", cfg, {}, Upper), Error);
  EXPECT_EQ(RewriteRecord(R"({"other":"v"})", cfg, {}, Upper), R"({"other":"v"})");
}

TEST(RewriteRecordTest, CsvColumnsByNameAndIndex) {
  InputConfig by_name{InputFormat::kCsv, {}, {"note"}, true};
  std::vector<std::string> header = {"id", "note"};
  EXPECT_EQ(RewriteRecord("1,abc", by_name, header, Upper), "1,ABC");
  EXPECT_EQ(RewriteRecord("\"1\",\"a,\"\"b\"\"\"", by_name, header, Upper),
            "\"1\",\"A,\"\"B\"\"\"");
  InputConfig by_index{InputFormat::kCsv, {}, {"0"}, false};
  EXPECT_EQ(RewriteRecord("abc,def", by_index, {}, Upper), "ABC,def");
  EXPECT_EQ(RewriteRecord("abc", by_name, header, Upper), "abc");
  EXPECT_THROW(RewriteRecord("\"open,x", by_name, header, Upper), Error);
}

Config WithKeys(Config c) {
  c.keyring = std::make_shared<const Keyring>(testing::FixedKeyring());
  return c;
}

TEST(PipelineTest, TextLinesAreMaskedInPlace) {
  Config c = DefaultConfig();
  std::istringstream in("My phone number is 111-111-1111\r\nnothing here\nssn 123-45-6789");
  std::ostringstream out;
  MetricsReport m = run_mask(in, out, c);
  EXPECT_EQ(out.str(), "My phone number is <PHONE_NUMBER>\r\nnothing here\nssn <SSN>");
  EXPECT_EQ(m.records_in, 3u);
  EXPECT_EQ(m.records_out, 3u);
  EXPECT_EQ(m.detections_by_type.at("PHONE_NUMBER"), 1u);
  EXPECT_EQ(m.masks_by_strategy.at("REDACT"), 2u);
  EXPECT_EQ(m.bytes_in, in.str().size());
  EXPECT_EQ(m.bytes_out, out.str().size());
}

TEST(PipelineTest, EmptyInput) {
  Config c = DefaultConfig();
  std::istringstream in("");
  std::ostringstream out;
  MetricsReport m = run_mask(in, out, c);
  EXPECT_EQ(out.str(), "");
  EXPECT_EQ(m.records_in, 0u);
  EXPECT_EQ(m.records_out, 0u);
  EXPECT_EQ(m.bytes_out, 0u);
  EXPECT_TRUE(m.detections_by_type.empty());
  EXPECT_TRUE(m.warnings.empty());
}

TEST(PipelineTest, BelowThresholdIsNeitherReportedNorMasked) {
  Config c = DefaultConfig();
  // Fails the Luhn check, so the card rule scores it under the threshold.
  std::string input = "card 4111111111111112\n";
  std::istringstream in(input);
  std::ostringstream report;
  run_detect(in, report, c);
  EXPECT_EQ(report.str(), "");
  std::istringstream again(input);
  std::ostringstream masked;
  run_mask(again, masked, c);
  EXPECT_EQ(masked.str(), input);
}

TEST(PipelineTest, NdjsonStructurePreserved) {
  Config c = DefaultConfig();
  c.input = {InputFormat::kNdjson, {"msg", "user.email"}, {}, true};
  std::istringstream in(
      "{\"ts\":1,\"msg\":\"call 111-111-1111\",\"user\":{\"email\":\"a@b.io\"},\"id\":\"123-45-6789\"}\n"
      "\n"
      "{\"msg\":null}\n");
  std::ostringstream out;
  run_mask(in, out, c);
  EXPECT_EQ(out.str(),
            "{\"ts\":1,\"msg\":\"call <PHONE_NUMBER>\",\"user\":{\"email\":\"<EMAIL>\"},"
            "\"id\":\"123-45-6789\"}\n"
            "\n"
            "{\"msg\":null}\n");
}

TEST(PipelineTest, CsvHeaderPassesThrough) {
  Config c = DefaultConfig();
  c.input = {InputFormat::kCsv, {}, {"note"}, true};
  std::istringstream in("id,note\n7,\"mail a@b.io, now\"\n8,ok\n");
  std::ostringstream out;
  MetricsReport m = run_mask(in, out, c);
  EXPECT_EQ(out.str(), "id,note\n7,\"mail <EMAIL>, now\"\n8,ok\n");
  EXPECT_EQ(m.records_in, 2u);
}

TEST(PipelineTest, DeadLetterKeepsStreamAligned) {
  Config c = DefaultConfig();
  c.input = {InputFormat::kNdjson, {"msg"}, {}, true};
  c.parallelism = 3;
  std::istringstream in("{\"msg\":\"111-111-1111\"}\n{broken\n{\"msg\":\"ok\"}\n");
  std::ostringstream out, dead;
  MetricsReport m = run_mask(in, out, c, &dead);
  EXPECT_EQ(out.str(),
            "{\"msg\":\"<PHONE_NUMBER>\"}\n{\"maskron_dead_letter\":1}\n{\"msg\":\"ok\"}\n");
  json d = json::parse(dead.str());
  EXPECT_EQ(d["record_index"], 1);
  EXPECT_EQ(d["record"], "{broken");
  EXPECT_NE(d["reason"].get<std::string>().find("ParseError"), std::string::npos);
  EXPECT_EQ(m.warnings.at("dead_letter"), 1u);
  EXPECT_EQ(m.records_out, 3u);
}

TEST(PipelineTest, StrategyFailureGoesToDeadLetter) {
  Config c = WithKeys(DefaultConfig());
  c.policy = validate_policy({{"types", {{"EMAIL", "CUSTOM_EMAIL"}}}}, c.keyring->ids());
  RegexRuleSource odd{"odd_email", "EMAIL", "mailbox-[0-9]+", 0.99};
  auto rules = DefaultRegexRules();
  rules.push_back(odd);
  c.regex_rules = RuleSet::Compile(rules);
  std::istringstream in("to mailbox-42\nto a@b.io\n");
  std::ostringstream out, dead;
  run_mask(in, out, c, &dead);
  EXPECT_EQ(out.str(), "<DEAD_LETTER>\nto x@b.io\n");
  EXPECT_NE(dead.str().find("NotAnEmail"), std::string::npos);
}

TEST(PipelineTest, ExistingTokensAreOpaque) {
  Config c = WithKeys(DefaultConfig());
  c.policy = validate_policy({{"default_strategy", {{"strategy", "HASH"}, {"salt_id", "s1"}}}},
                             c.keyring->ids());
  Pipeline p(c);
  std::string once = p.Mask("ssn 123-45-6789 and card 4111111111111111").text;
  EXPECT_TRUE(p.Detect(once).resolved.empty());
  // A second pass finds nothing new; the old tokens come back as literals.
  MaskedDocument twice = p.Mask(once);
  EXPECT_TRUE(twice.audit.empty());
  EXPECT_EQ(unmask(twice.text, *c.keyring).text, once);
}

TEST(PipelineTest, ParallelOutputIsDeterministic) {
  Config c = WithKeys(DefaultConfig());
  c.policy = validate_policy({{"default_strategy", {{"strategy", "PSEUDONYMIZE"}, {"key_id", "k1"}}}},
                             c.keyring->ids());
  std::ostringstream corpus;
  SyntheticOptions opts;
  opts.n_docs = 800;
  opts.mix = DefaultSyntheticMix();
  opts.mix.erase(PiiType::Parse("PERSON_NAME"));
  for (const AnnotatedDoc& d : generate_synthetic_corpus(opts)) corpus << d.text << '\n';
  std::string serial_out, parallel_out;
  MetricsReport serial, parallel;
  {
    std::istringstream in(corpus.str());
    std::ostringstream out;
    serial = run_mask(in, out, c);
    serial_out = out.str();
  }
  c.parallelism = 8;
  c.queue_depth = 4;
  {
    std::istringstream in(corpus.str());
    std::ostringstream out;
    parallel = run_mask(in, out, c);
    parallel_out = out.str();
  }
  EXPECT_EQ(serial_out, parallel_out);
  EXPECT_TRUE(serial.SameCounters(parallel));
  EXPECT_EQ(serial.records_in, 800u);
}

TEST(PipelineTest, DetectReportsMatchMaskedSpans) {
  Config c = DefaultConfig();
  c.input = {InputFormat::kNdjson, {"a", "b"}, {}, true};
  std::string input = "{\"a\":\"x 111-111-1111\",\"b\":\"1.2.3.4\"}\n";
  std::istringstream in(input);
  std::ostringstream out;
  run_detect(in, out, c);
  std::istringstream lines(out.str());
  std::vector<json> got;
  for (std::string line; std::getline(lines, line);) got.push_back(json::parse(line));
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0]["field"], "a");
  EXPECT_EQ(got[0]["start"], 2);
  EXPECT_EQ(got[0]["end"], 14);
  EXPECT_EQ(got[0]["type"], "PHONE_NUMBER");
  EXPECT_EQ(got[0]["detector_id"], "regex:phone_us_dashed_v1");
  EXPECT_EQ(got[1]["field"], "b");
  EXPECT_EQ(got[1]["type"], "IP_ADDRESS");
}

TEST(PipelineTest, ExternalDetectorParticipates) {
  testing::FakeDetectorServer server;
  server.SetHandler([](const testing::FakeDetectorServer::Request& req) {
    auto pos = req.text.find("Alice");
    json entities = json::array();
    if (pos != std::string::npos) {
      entities.push_back({{"start", pos}, {"end", pos + 5}, {"type", "PERSON_NAME"},
                          {"confidence", 0.97}});
      entities.push_back({{"start", 0}, {"end", 999}, {"type", "PERSON_NAME"},
                          {"confidence", 0.97}});
    }
    return testing::FakeDetectorServer::Reply{200, json{{"entities", entities}}.dump()};
  });
  Config c = DefaultConfig();
  ExternalEndpoint ep;
  ep.name = "ner";
  ep.url = server.url();
  ep.data_leaves_boundary = true;
  c.external.push_back(ep);
  std::istringstream in("hi Alice at 111-111-1111\n");
  std::ostringstream out;
  MetricsReport m = run_mask(in, out, c);
  EXPECT_EQ(out.str(), "hi <PERSON_NAME> at <PHONE_NUMBER>\n");
  EXPECT_EQ(m.warnings.at("external_span_out_of_range"), 1u);
}

TEST(PipelineTest, UnreachableExternalDetectorDeadLetters) {
  Config c = DefaultConfig();
  ExternalEndpoint ep;
  ep.name = "gone";
  ep.url = "http://127.0.0.1:1/detect";
  ep.max_retries = 0;
  ep.data_leaves_boundary = true;
  c.external.push_back(ep);
  std::istringstream in("a\n");
  std::ostringstream out, dead;
  run_mask(in, out, c, &dead);
  EXPECT_EQ(out.str(), "<DEAD_LETTER>\n");
  EXPECT_NE(dead.str().find("Unreachable"), std::string::npos);
}

}  // namespace
}  // namespace maskron
