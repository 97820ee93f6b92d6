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

#ifndef MASKRON_EXTERNAL_DETECTOR_H_
#define MASKRON_EXTERNAL_DETECTOR_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "maskron/types.h"

namespace maskron {

// A remote model-backed detector (fine-tuned NER model, LLM wrapper, ...).
//
// Wire protocol: POST <url> with body {"text": "<document>"} and, when
// api_key_env names a set variable, "Authorization: Bearer <value>". The
// reply is {"entities": [{"start": int, "end": int, "type": string,
// "confidence": number}]} with byte offsets into the UTF-8 text.
// Health probes GET <url>/health.
struct ExternalEndpoint {
  std::string name;
  std::string url;
  int timeout_ms = 2000;
  int max_retries = 2;
  double confidence_floor = 0.5;
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header.
  std::string api_key_env;
  // The operator's acknowledgment that documents are sent off-host. No
  // request is issued while this is false.
  bool data_leaves_boundary = false;
  // First retry waits up to this long; each further retry doubles the cap.
  int backoff_base_ms = 100;
  // Cap on concurrent requests issued through one ExternalDetector.
  int max_in_flight = 8;
};

// Throws Error(kValidationError) on out-of-range settings or a URL that is
// not http(s)://host[:port][/path].
void ValidateEndpoint(const ExternalEndpoint& endpoint);

struct RemoteResult {
  std::vector<Detection> detections;
  // Entities whose span fell outside the text or split a character.
  std::size_t span_out_of_range = 0;
  // Entities with an unknown type or a confidence outside [0,1].
  std::size_t bad_entities = 0;
  std::size_t below_floor = 0;
  std::size_t attempts = 0;
};

struct HealthStatus {
  enum class Kind { kOk, kDegraded, kDown };
  Kind kind = Kind::kDown;
  std::int64_t latency_ms = 0;
  std::string reason;
};

class ExternalDetector {
 public:
  explicit ExternalDetector(ExternalEndpoint endpoint);
  ~ExternalDetector();
  ExternalDetector(const ExternalDetector&) = delete;
  ExternalDetector& operator=(const ExternalDetector&) = delete;

  // Throws Error(kBoundaryNotAcknowledged) before touching the network when
  // the acknowledgment flag is unset; otherwise Error(kTimeout),
  // Error(kUnreachable), Error(kAuthFailed) or Error(kBadResponse) once
  // retries are exhausted. Out-of-range spans are dropped and counted, never
  // thrown.
  RemoteResult Detect(std::string_view text) const;

  // 200 within the timeout is OK (DEGRADED past half the timeout); anything
  // else is DOWN with a reason such as "Timeout" or "AuthFailed".
  HealthStatus Health() const;

  const ExternalEndpoint& endpoint() const { return endpoint_; }

 private:
  struct Impl;
  ExternalEndpoint endpoint_;
  std::unique_ptr<Impl> impl_;
};

RemoteResult detect_remote(std::string_view text, const ExternalEndpoint& endpoint);
HealthStatus health_check(const ExternalEndpoint& endpoint);

}  // namespace maskron

#endif  // MASKRON_EXTERNAL_DETECTOR_H_
