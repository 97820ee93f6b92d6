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

#include <chrono>
#include <cstdlib>
#include <random>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "maskron/error.h"

namespace maskron {
namespace {

using Clock = std::chrono::steady_clock;

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

ParsedUrl ParseUrl(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kValidationError, "url has no scheme: " + url);
  }
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kValidationError, "url scheme must be http or https: " + url);
  }
  std::size_t host_start = scheme_end + 3;
  std::size_t path_start = url.find('/', host_start);
  std::string authority = url.substr(host_start, path_start == std::string::npos
                                                     ? std::string::npos
                                                     : path_start - host_start);
  if (authority.empty() || authority.find('@') != std::string::npos) {
    throw Error(ErrorCode::kValidationError, "url needs a plain host[:port]: " + url);
  }
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  return {scheme + "://" + authority, path};
}

std::string JoinPath(const std::string& base, std::string_view suffix) {
  std::string out = base;
  while (!out.empty() && out.back() == '/') out.pop_back();
  out += suffix;
  return out;
}

bool Retryable(ErrorCode code) {
  return code == ErrorCode::kTimeout || code == ErrorCode::kUnreachable;
}

}  // namespace

struct ExternalDetector::Impl {
  explicit Impl(const ExternalEndpoint& ep)
      : url(ParseUrl(ep.url)), in_flight(ep.max_in_flight) {}

  std::unique_ptr<httplib::Client> MakeClient(const ExternalEndpoint& ep) const {
    auto client = std::make_unique<httplib::Client>(url.scheme_host_port);
    auto timeout = std::chrono::milliseconds(ep.timeout_ms);
    client->set_connection_timeout(timeout);
    client->set_read_timeout(timeout);
    client->set_write_timeout(timeout);
    client->set_keep_alive(false);
    return client;
  }

  ParsedUrl url;
  mutable std::counting_semaphore<1024> in_flight;
};

void ValidateEndpoint(const ExternalEndpoint& endpoint) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kValidationError, "endpoint '" + endpoint.name + "': " + why);
  };
  if (endpoint.name.empty()) throw fail("name is empty");
  if (endpoint.timeout_ms < 1) throw fail("timeout_ms must be >= 1");
  if (endpoint.max_retries < 0 || endpoint.max_retries > 5) {
    throw fail("max_retries must lie in [0, 5]");
  }
  if (!(endpoint.confidence_floor >= 0.0 && endpoint.confidence_floor <= 1.0)) {
    throw fail("confidence_floor must lie in [0, 1]");
  }
  if (endpoint.backoff_base_ms < 0) throw fail("backoff_base_ms must be >= 0");
  if (endpoint.max_in_flight < 1 || endpoint.max_in_flight > 1024) {
    throw fail("max_in_flight must lie in [1, 1024]");
  }
  ParseUrl(endpoint.url);
}

ExternalDetector::ExternalDetector(ExternalEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  ValidateEndpoint(endpoint_);
  impl_ = std::make_unique<Impl>(endpoint_);
}

ExternalDetector::~ExternalDetector() = default;

RemoteResult ExternalDetector::Detect(std::string_view text) const {
  if (!endpoint_.data_leaves_boundary) {
    throw Error(ErrorCode::kBoundaryNotAcknowledged,
                "endpoint '" + endpoint_.name +
                    "' requires external_data_leaves_boundary = true");
  }
  httplib::Headers headers;
  if (!endpoint_.api_key_env.empty()) {
    const char* credential = std::getenv(endpoint_.api_key_env.c_str());
    if (credential == nullptr || *credential == '\0') {
      throw Error(ErrorCode::kAuthFailed,
                  "environment variable " + endpoint_.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + credential);
  }
  std::string body = nlohmann::json{{"text", std::string(text)}}.dump();

  impl_->in_flight.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{impl_->in_flight};

  thread_local std::mt19937_64 jitter_rng{std::random_device{}()};
  RemoteResult result;
  std::string response_body;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 0) {
      std::int64_t cap = static_cast<std::int64_t>(endpoint_.backoff_base_ms) << (attempt - 1);
      std::uniform_int_distribution<std::int64_t> wait(0, cap);
      std::this_thread::sleep_for(std::chrono::milliseconds(wait(jitter_rng)));
    }
    ++result.attempts;
    auto client = impl_->MakeClient(endpoint_);
    auto started = Clock::now();
    auto res = client->Post(impl_->url.path, headers, body, "application/json");
    auto elapsed = Clock::now() - started;

    ErrorCode failure;
    std::string reason;
    if (!res) {
      bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                       elapsed >= std::chrono::milliseconds(endpoint_.timeout_ms);
      failure = timed_out ? ErrorCode::kTimeout : ErrorCode::kUnreachable;
      reason = httplib::to_string(res.error());
    } else if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::kAuthFailed,
                  endpoint_.name + " answered HTTP " + std::to_string(res->status));
    } else if (res->status == 429 || res->status >= 500) {
      failure = ErrorCode::kUnreachable;
      reason = "HTTP " + std::to_string(res->status);
    } else if (res->status != 200) {
      throw Error(ErrorCode::kBadResponse,
                  endpoint_.name + " answered HTTP " + std::to_string(res->status));
    } else {
      response_body = std::move(res->body);
      break;
    }
    if (!Retryable(failure) || attempt >= endpoint_.max_retries) {
      throw Error(failure, endpoint_.name + ": " + reason + " after " +
                               std::to_string(result.attempts) + " attempt(s)");
    }
  }

  nlohmann::json reply = nlohmann::json::parse(response_body, nullptr, false);
  if (reply.is_discarded() || !reply.is_object()) {
    throw Error(ErrorCode::kBadResponse, endpoint_.name + ": body is not a JSON object");
  }
  auto entities = reply.find("entities");
  if (entities == reply.end() || !entities->is_array()) {
    throw Error(ErrorCode::kBadResponse, endpoint_.name + ": missing entities array");
  }
  const std::string detector_id = "external:" + endpoint_.name;
  for (const auto& e : *entities) {
    if (!e.is_object() || !e.contains("start") || !e.contains("end") ||
        !e.contains("type") || !e.contains("confidence") ||
        !e["start"].is_number_integer() || !e["end"].is_number_integer() ||
        !e["type"].is_string() || !e["confidence"].is_number()) {
      throw Error(ErrorCode::kBadResponse, endpoint_.name + ": malformed entity " + e.dump());
    }
    double confidence = e["confidence"].get<double>();
    const std::string type_name = e["type"].get<std::string>();
    if (!(confidence >= 0.0 && confidence <= 1.0) || !PiiType::IsValidName(type_name)) {
      ++result.bad_entities;
      continue;
    }
    std::int64_t start = e["start"].get<std::int64_t>();
    std::int64_t end = e["end"].get<std::int64_t>();
    if (start < 0 || end <= start || static_cast<std::uint64_t>(end) > text.size() ||
        !IsCharBoundary(text, static_cast<std::size_t>(start)) ||
        !IsCharBoundary(text, static_cast<std::size_t>(end))) {
      ++result.span_out_of_range;
      continue;
    }
    if (confidence < endpoint_.confidence_floor) {
      ++result.below_floor;
      continue;
    }
    result.detections.push_back(MakeDetection(
        text, Span{static_cast<std::size_t>(start), static_cast<std::size_t>(end)},
        PiiType::Parse(type_name), confidence, detector_id));
  }
  return result;
}

HealthStatus ExternalDetector::Health() const {
  HealthStatus status;
  httplib::Headers headers;
  if (!endpoint_.api_key_env.empty()) {
    if (const char* credential = std::getenv(endpoint_.api_key_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + credential);
    }
  }
  auto client = impl_->MakeClient(endpoint_);
  auto started = Clock::now();
  auto res = client->Get(JoinPath(impl_->url.path, "/health"), headers);
  auto elapsed = Clock::now() - started;
  status.latency_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  if (!res) {
    bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                     elapsed >= std::chrono::milliseconds(endpoint_.timeout_ms);
    status.reason = timed_out ? "Timeout" : "Unreachable: " + httplib::to_string(res.error());
    return status;
  }
  if (res->status == 401 || res->status == 403) {
    status.reason = "AuthFailed";
    return status;
  }
  if (res->status != 200) {
    status.reason = "HTTP " + std::to_string(res->status);
    return status;
  }
  status.kind = status.latency_ms * 2 > endpoint_.timeout_ms ? HealthStatus::Kind::kDegraded
                                                             : HealthStatus::Kind::kOk;
  return status;
}

RemoteResult detect_remote(std::string_view text, const ExternalEndpoint& endpoint) {
  return ExternalDetector(endpoint).Detect(text);
}

HealthStatus health_check(const ExternalEndpoint& endpoint) {
  return ExternalDetector(endpoint).Health();
}

}  // namespace maskron
