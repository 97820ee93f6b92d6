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

#include "maskron/metrics.h"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace maskron {
namespace {

void AddInto(std::map<std::string, std::uint64_t>& into,
             const std::map<std::string, std::uint64_t>& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

}  // namespace

double MetricsReport::throughput_mb_s() const {
  if (elapsed_ms <= 0.0) return 0.0;
  return static_cast<double>(bytes_in) / 1e6 / (elapsed_ms / 1e3);
}

bool MetricsReport::SameCounters(const MetricsReport& other) const {
  return records_in == other.records_in && records_out == other.records_out &&
         bytes_in == other.bytes_in && bytes_out == other.bytes_out &&
         detections_by_type == other.detections_by_type &&
         masks_by_strategy == other.masks_by_strategy && warnings == other.warnings;
}

MetricsReport merge_metrics(const MetricsReport& a, const MetricsReport& b) {
  MetricsReport out = a;
  out.records_in += b.records_in;
  out.records_out += b.records_out;
  out.bytes_in += b.bytes_in;
  out.bytes_out += b.bytes_out;
  AddInto(out.detections_by_type, b.detections_by_type);
  AddInto(out.masks_by_strategy, b.masks_by_strategy);
  AddInto(out.warnings, b.warnings);
  out.elapsed_ms = std::max(a.elapsed_ms, b.elapsed_ms);
  return out;
}

nlohmann::json MetricsToJson(const MetricsReport& report) {
  return nlohmann::json{
      {"records_in", report.records_in},
      {"records_out", report.records_out},
      {"bytes_in", report.bytes_in},
      {"bytes_out", report.bytes_out},
      {"detections_by_type", report.detections_by_type},
      {"masks_by_strategy", report.masks_by_strategy},
      {"warnings", report.warnings},
      {"elapsed_ms", report.elapsed_ms},
      {"throughput_mb_s", report.throughput_mb_s()},
  };
}

}  // namespace maskron
