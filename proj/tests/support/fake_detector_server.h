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

#ifndef MASKRON_TESTS_SUPPORT_FAKE_DETECTOR_SERVER_H_
#define MASKRON_TESTS_SUPPORT_FAKE_DETECTOR_SERVER_H_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace maskron::testing {

// In-process HTTP stand-in for a remote detector. Binds 127.0.0.1 on an
// ephemeral port; POST /detect and GET /detect/health are routed to
// replaceable handlers. Every request is counted.
class FakeDetectorServer {
 public:
  struct Reply {
    int status = 200;
    std::string body = R"({"entities":[]})";
    int delay_ms = 0;
  };
  struct Request {
    std::string text;
    std::string authorization;
  };
  using Handler = std::function<Reply(const Request&)>;

  FakeDetectorServer();
  ~FakeDetectorServer();
  FakeDetectorServer(const FakeDetectorServer&) = delete;
  FakeDetectorServer& operator=(const FakeDetectorServer&) = delete;

  void SetHandler(Handler handler);
  void SetReply(Reply reply);
  void SetHealthReply(Reply reply);

  // Base URL of the detect route, e.g. http://127.0.0.1:41234/detect.
  std::string url() const;
  int port() const { return port_; }

  int detect_requests() const { return detect_requests_.load(); }
  int health_requests() const { return health_requests_.load(); }
  void ResetCounters();
  Request last_request() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> detect_requests_{0};
  std::atomic<int> health_requests_{0};
  mutable std::mutex mu_;
  Handler handler_;
  Reply health_;
  Request last_;
};

}  // namespace maskron::testing

#endif  // MASKRON_TESTS_SUPPORT_FAKE_DETECTOR_SERVER_H_
