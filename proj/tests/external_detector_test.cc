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

#include "maskron/external_detector.h"

#include <cstdlib>

#include <gtest/gtest.h>

#include "maskron/error.h"
#include "support/fake_detector_server.h"

namespace maskron {
namespace {

using testing::FakeDetectorServer;

class ExternalDetectorTest : public ::testing::Test {
 protected:
  ExternalEndpoint Endpoint() const {
    ExternalEndpoint ep;
    ep.name = "ner";
    ep.url = server_.url();
    ep.timeout_ms = 300;
    ep.max_retries = 2;
    ep.backoff_base_ms = 1;
    ep.data_leaves_boundary = true;
    return ep;
  }

  ErrorCode DetectError(const ExternalEndpoint& ep, std::string_view text) {
    try {
      detect_remote(text, ep);
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::kInvalidArgument;
  }

  FakeDetectorServer server_;
};

TEST_F(ExternalDetectorTest, EchoesEntities) {
  server_.SetReply(
      {200, R"({"entities":[{"start":3,"end":8,"type":"PERSON_NAME","confidence":0.97}]})"});
  RemoteResult r = detect_remote("hi Alice", Endpoint());
  ASSERT_EQ(r.detections.size(), 1u);
  EXPECT_EQ(r.detections[0].matched_text, "Alice");
  EXPECT_EQ(r.detections[0].detector_id, "external:ner");
  EXPECT_DOUBLE_EQ(r.detections[0].confidence, 0.97);
  EXPECT_EQ(r.attempts, 1u);
  EXPECT_EQ(server_.last_request().text, "hi Alice");
}

TEST_F(ExternalDetectorTest, ConfidenceFloor) {
  server_.SetReply(
      {200, R"({"entities":[{"start":3,"end":8,"type":"PERSON_NAME","confidence":0.2}]})"});
  RemoteResult r = detect_remote("hi Alice", Endpoint());
  EXPECT_TRUE(r.detections.empty());
  EXPECT_EQ(r.below_floor, 1u);
}

TEST_F(ExternalDetectorTest, SpanValidation) {
  server_.SetReply({200, R"({"entities":[
      {"start":3,"end":99,"type":"PERSON_NAME","confidence":0.9},
      {"start":5,"end":3,"type":"PERSON_NAME","confidence":0.9},
      {"start":2,"end":4,"type":"PERSON_NAME","confidence":0.9},
      {"start":0,"end":2,"type":"NOT_A_TYPE","confidence":0.9},
      {"start":0,"end":2,"type":"SSN","confidence":1.5},
      {"start":0,"end":3,"type":"SSN","confidence":0.9}]})"});
  RemoteResult r = detect_remote("h\xc3\xa9llo", Endpoint());
  EXPECT_EQ(r.span_out_of_range, 3u);
  EXPECT_EQ(r.bad_entities, 2u);
  ASSERT_EQ(r.detections.size(), 1u);
  EXPECT_EQ(r.detections[0].span, (Span{0, 3}));
}

TEST_F(ExternalDetectorTest, MalformedBodies) {
  server_.SetReply({200, "not json"});
  EXPECT_EQ(DetectError(Endpoint(), "x"), ErrorCode::kBadResponse);
  server_.SetReply({200, R"({"items":[]})"});
  EXPECT_EQ(DetectError(Endpoint(), "x"), ErrorCode::kBadResponse);
  server_.SetReply({400, "{}"});
  EXPECT_EQ(DetectError(Endpoint(), "x"), ErrorCode::kBadResponse);
}

TEST_F(ExternalDetectorTest, RetriesAreBounded) {
  for (int retries : {0, 1, 3}) {
    server_.ResetCounters();
    server_.SetReply({503, "{}"});
    ExternalEndpoint ep = Endpoint();
    ep.max_retries = retries;
    EXPECT_EQ(DetectError(ep, "x"), ErrorCode::kUnreachable);
    EXPECT_EQ(server_.detect_requests(), retries + 1);
  }
}

TEST_F(ExternalDetectorTest, RecoversAfterTransientFailure) {
  int calls = 0;
  server_.SetHandler([&calls](const FakeDetectorServer::Request&) {
    return ++calls < 3 ? FakeDetectorServer::Reply{429, "{}"} : FakeDetectorServer::Reply{};
  });
  RemoteResult r = detect_remote("x", Endpoint());
  EXPECT_EQ(r.attempts, 3u);
}

TEST_F(ExternalDetectorTest, AuthFailureIsNotRetried) {
  server_.SetReply({401, "{}"});
  EXPECT_EQ(DetectError(Endpoint(), "x"), ErrorCode::kAuthFailed);
  EXPECT_EQ(server_.detect_requests(), 1);
}

TEST_F(ExternalDetectorTest, TimeoutIsRetriedThenReported) {
  server_.SetReply({200, R"({"entities":[]})", 600});
  ExternalEndpoint ep = Endpoint();
  ep.timeout_ms = 100;
  ep.max_retries = 1;
  EXPECT_EQ(DetectError(ep, "x"), ErrorCode::kTimeout);
}

TEST_F(ExternalDetectorTest, NoRequestWithoutBoundaryAcknowledgment) {
  ExternalEndpoint ep = Endpoint();
  ep.data_leaves_boundary = false;
  EXPECT_EQ(DetectError(ep, "secret"), ErrorCode::kBoundaryNotAcknowledged);
  EXPECT_EQ(server_.detect_requests(), 0);
}

TEST_F(ExternalDetectorTest, BearerCredentialFromEnvironment) {
  ExternalEndpoint ep = Endpoint();
  ep.api_key_env = "MASKRON_TEST_DETECTOR_TOKEN";
  ::unsetenv(ep.api_key_env.c_str());
  EXPECT_EQ(DetectError(ep, "x"), ErrorCode::kAuthFailed);
  EXPECT_EQ(server_.detect_requests(), 0);
  ::setenv(ep.api_key_env.c_str(), "t0ken", 1);
  detect_remote("x", ep);
  EXPECT_EQ(server_.last_request().authorization, "Bearer t0ken");
  ::unsetenv(ep.api_key_env.c_str());
}

TEST_F(ExternalDetectorTest, UnreachableHost) {
  ExternalEndpoint ep = Endpoint();
  ep.url = "http://127.0.0.1:1/detect";
  ep.max_retries = 0;
  EXPECT_EQ(DetectError(ep, "x"), ErrorCode::kUnreachable);
}

TEST_F(ExternalDetectorTest, Health) {
  HealthStatus ok = health_check(Endpoint());
  EXPECT_EQ(ok.kind, HealthStatus::Kind::kOk);
  EXPECT_EQ(server_.health_requests(), 1);

  server_.SetHealthReply({200, "{}", 200});
  ExternalEndpoint ep = Endpoint();
  ep.timeout_ms = 300;
  EXPECT_EQ(health_check(ep).kind, HealthStatus::Kind::kDegraded);

  server_.SetHealthReply({200, "{}", 600});
  ep.timeout_ms = 100;
  HealthStatus slow = health_check(ep);
  EXPECT_EQ(slow.kind, HealthStatus::Kind::kDown);
  EXPECT_EQ(slow.reason, "Timeout");

  server_.SetHealthReply({403, "{}"});
  EXPECT_EQ(health_check(Endpoint()).reason, "AuthFailed");
}

TEST(ExternalEndpointTest, Validation) {
  ExternalEndpoint ep;
  ep.name = "x";
  ep.url = "ftp://host/";
  EXPECT_THROW(ValidateEndpoint(ep), Error);
  ep.url = "http://host:8080/v1/detect";
  EXPECT_NO_THROW(ValidateEndpoint(ep));
  ep.max_retries = 9;
  EXPECT_THROW(ValidateEndpoint(ep), Error);
  ep.max_retries = 1;
  ep.confidence_floor = 1.2;
  EXPECT_THROW(ValidateEndpoint(ep), Error);
}

}  // namespace
}  // namespace maskron
