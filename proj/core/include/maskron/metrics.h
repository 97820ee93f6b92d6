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

#ifndef MASKRON_METRICS_H_
#define MASKRON_METRICS_H_

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace maskron {

struct MetricsReport {
  std::uint64_t records_in = 0;
  std::uint64_t records_out = 0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  std::map<std::string, std::uint64_t> detections_by_type;
  std::map<std::string, std::uint64_t> masks_by_strategy;
  std::map<std::string, std::uint64_t> warnings;
  double elapsed_ms = 0.0;

  // bytes_in over elapsed time, in MB/s (10^6 bytes).
  double throughput_mb_s() const;

  // Everything except timing.
  bool SameCounters(const MetricsReport& other) const;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Field-wise sums; elapsed is the max of the two.
MetricsReport merge_metrics(const MetricsReport& a, const MetricsReport& b);

nlohmann::json MetricsToJson(const MetricsReport& report);

}  // namespace maskron

#endif  // MASKRON_METRICS_H_
