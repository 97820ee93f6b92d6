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

#ifndef MASKRON_PIPELINE_H_
#define MASKRON_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "maskron/config.h"
#include "maskron/metrics.h"
#include "maskron/types.h"

namespace maskron {

// Detections for one text value after resolution, plus the counters the
// detect step contributes to the metrics report.
struct TextDetections {
  std::vector<Detection> resolved;
  std::map<std::string, std::uint64_t> warnings;
};

// Detect -> resolve -> mask over record streams.
//
// Records are read on one thread, processed by `parallelism` workers and
// written in input order. A record that fails (malformed NDJSON/CSV, an
// unreachable external detector, a strategy error) is replaced in the main
// output by a placeholder and copied, with the reason, to the dead-letter
// stream as {"record_index", "reason", "record"}. Placeholders are
// "<DEAD_LETTER>" for text and CSV and {"maskron_dead_letter": <index>} for
// NDJSON.
class Pipeline {
 public:
  explicit Pipeline(Config config);
  ~Pipeline();
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  // Runs every enabled detector over `text`, drops detections inside
  // existing mask tokens and resolves the rest. Throws on detector failure.
  TextDetections Detect(std::string_view text) const;
  MaskedDocument Mask(std::string_view text) const;

  MetricsReport RunMask(std::istream& in, std::ostream& out,
                        std::ostream* dead_letter = nullptr) const;

  // Emits one NDJSON line per resolved detection:
  // {"record_index", ["field",] "start", "end", "type", "confidence",
  //  "detector_id"}. Offsets are bytes into the scanned value.
  MetricsReport RunDetect(std::istream& in, std::ostream& out,
                          std::ostream* dead_letter = nullptr) const;

  const Config& config() const { return config_; }

 private:
  struct Detectors;
  enum class Mode { kMask, kDetect };
  MetricsReport Run(Mode mode, std::istream& in, std::ostream& out,
                    std::ostream* dead_letter) const;

  Config config_;
  std::unique_ptr<Detectors> detectors_;
};

MetricsReport run_mask(std::istream& in, std::ostream& out, const Config& config,
                       std::ostream* dead_letter = nullptr);
MetricsReport run_detect(std::istream& in, std::ostream& out, const Config& config,
                         std::ostream* dead_letter = nullptr);

}  // namespace maskron

#endif  // MASKRON_PIPELINE_H_
