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

#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "maskron/error.h"
#include "maskron/external_detector.h"
#include "maskron/masking.h"
#include "maskron/resolve.h"

namespace maskron {
namespace {

struct Job {
  std::uint64_t seq;
  RawRecord record;
};

struct Outcome {
  std::string output;
  std::string terminator;
  bool failed = false;
  std::string reason;
  std::string original;
};

// Reads on a dedicated thread, processes on `workers` threads and hands
// results to `sink` on the calling thread in sequence order. At most
// `window` records are buffered between reader and sink. With one worker
// everything runs inline on the calling thread.
template <typename Source, typename Work, typename Sink>
void RunOrdered(std::size_t workers, std::size_t window, Source next, Work work, Sink sink) {
  if (workers <= 1) {
    for (std::uint64_t seq = 0;; ++seq) {
      std::optional<RawRecord> rec = next();
      if (!rec) return;
      sink(work(0, Job{seq, std::move(*rec)}));
    }
  }

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Job> pending;
  std::map<std::uint64_t, Outcome> done;
  std::uint64_t next_emit = 0;
  std::uint64_t total_read = 0;
  bool reading_done = false;
  bool aborted = false;
  std::exception_ptr reader_error;

  std::thread reader([&] {
    try {
      for (std::uint64_t seq = 0;; ++seq) {
        std::optional<RawRecord> rec = next();
        std::unique_lock lock(mu);
        if (!rec) break;
        cv.wait(lock, [&] { return aborted || seq - next_emit < window; });
        if (aborted) break;
        pending.push_back(Job{seq, std::move(*rec)});
        total_read = seq + 1;
        cv.notify_all();
      }
    } catch (...) {
      std::lock_guard lock(mu);
      reader_error = std::current_exception();
    }
    std::lock_guard lock(mu);
    reading_done = true;
    cv.notify_all();
  });

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      while (true) {
        Job job;
        {
          std::unique_lock lock(mu);
          cv.wait(lock, [&] { return aborted || !pending.empty() || reading_done; });
          if (aborted || pending.empty()) return;
          job = std::move(pending.front());
          pending.pop_front();
        }
        std::uint64_t seq = job.seq;
        Outcome outcome = work(w, std::move(job));
        std::lock_guard lock(mu);
        done.emplace(seq, std::move(outcome));
        cv.notify_all();
      }
    });
  }

  std::exception_ptr sink_error;
  {
    std::unique_lock lock(mu);
    while (true) {
      cv.wait(lock, [&] {
        return done.contains(next_emit) || (reading_done && next_emit == total_read);
      });
      auto it = done.find(next_emit);
      if (it == done.end()) break;
      Outcome outcome = std::move(it->second);
      done.erase(it);
      ++next_emit;
      cv.notify_all();
      lock.unlock();
      try {
        sink(std::move(outcome));
      } catch (...) {
        sink_error = std::current_exception();
      }
      lock.lock();
      if (sink_error) {
        aborted = true;
        cv.notify_all();
        break;
      }
    }
  }
  reader.join();
  for (auto& t : pool) t.join();
  if (reader_error) std::rethrow_exception(reader_error);
  if (sink_error) std::rethrow_exception(sink_error);
}

void Bump(std::map<std::string, std::uint64_t>& m, const std::string& key,
          std::uint64_t by = 1) {
  if (by > 0) m[key] += by;
}

}  // namespace

struct Pipeline::Detectors {
  std::vector<std::unique_ptr<ExternalDetector>> external;
};

Pipeline::Pipeline(Config config)
    : config_(std::move(config)), detectors_(std::make_unique<Detectors>()) {
  for (const auto& ep : config_.external) {
    detectors_->external.push_back(std::make_unique<ExternalDetector>(ep));
  }
}

Pipeline::~Pipeline() = default;

TextDetections Pipeline::Detect(std::string_view text) const {
  TextDetections out;
  std::vector<Detection> all = scan_regex(text, config_.regex_rules);
  for (const auto& dict : config_.dictionaries) {
    auto found = dict->Scan(text);
    all.insert(all.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  }
  for (const auto& ext : detectors_->external) {
    RemoteResult r = ext->Detect(text);
    Bump(out.warnings, "external_span_out_of_range", r.span_out_of_range);
    Bump(out.warnings, "external_bad_entity", r.bad_entities);
    all.insert(all.end(), std::make_move_iterator(r.detections.begin()),
               std::make_move_iterator(r.detections.end()));
  }
  // Our own tokens are opaque: never re-detect inside them.
  std::vector<Span> tokens = FindMaskTokens(text);
  if (!tokens.empty()) {
    std::erase_if(all, [&](const Detection& d) {
      return std::any_of(tokens.begin(), tokens.end(),
                         [&](const Span& t) { return spans_overlap(t, d.span); });
    });
  }
  ResolveResult resolved = ResolveWithStats(all, config_.policy, config_.precedence);
  Bump(out.warnings, "type_conflict", resolved.type_conflicts);
  out.resolved = std::move(resolved.kept);
  return out;
}

MaskedDocument Pipeline::Mask(std::string_view text) const {
  TextDetections found = Detect(text);
  return apply_policy(text, found.resolved, config_.policy, *config_.keyring);
}

MetricsReport Pipeline::RunMask(std::istream& in, std::ostream& out,
                                std::ostream* dead_letter) const {
  return Run(Mode::kMask, in, out, dead_letter);
}

MetricsReport Pipeline::RunDetect(std::istream& in, std::ostream& out,
                                  std::ostream* dead_letter) const {
  return Run(Mode::kDetect, in, out, dead_letter);
}

MetricsReport Pipeline::Run(Mode mode, std::istream& in, std::ostream& out,
                            std::ostream* dead_letter) const {
  auto started = std::chrono::steady_clock::now();
  RecordReader reader(in, config_.input.format);
  MetricsReport writer_report;

  std::vector<std::string> csv_header;
  if (config_.input.format == InputFormat::kCsv && config_.input.csv_header) {
    if (auto header = reader.Next()) {
      csv_header = ParseCsvRecord(header->body);
      writer_report.bytes_in += header->body.size() + header->terminator.size();
      if (mode == Mode::kMask) {
        out << header->body << header->terminator;
        writer_report.bytes_out += header->body.size() + header->terminator.size();
      }
    }
  }

  const std::size_t workers = std::max<std::size_t>(1, config_.parallelism);
  std::vector<MetricsReport> worker_reports(workers);

  auto work = [&](std::size_t w, Job job) -> Outcome {
    MetricsReport delta;
    delta.records_in = 1;
    delta.bytes_in = job.record.body.size() + job.record.terminator.size();
    Outcome outcome;
    outcome.terminator = job.record.terminator;
    std::string report_lines;
    try {
      auto rewrite = [&](std::string_view field, std::string_view text) -> std::string {
        TextDetections found = Detect(text);
        for (const auto& [k, v] : found.warnings) delta.warnings[k] += v;
        for (const Detection& d : found.resolved) ++delta.detections_by_type[d.pii_type.name()];
        if (mode == Mode::kDetect) {
          for (const Detection& d : found.resolved) {
            nlohmann::json line{{"record_index", job.seq}};
            if (config_.input.format != InputFormat::kTextLines) line["field"] = field;
            line["start"] = d.span.start;
            line["end"] = d.span.end;
            line["type"] = d.pii_type.name();
            line["confidence"] = d.confidence;
            line["detector_id"] = d.detector_id;
            report_lines += line.dump();
            report_lines += '\n';
          }
          return std::string(text);
        }
        MaskedDocument doc =
            apply_policy(text, found.resolved, config_.policy, *config_.keyring);
        for (const AuditEntry& a : doc.audit) {
          ++delta.masks_by_strategy[std::string(StrategyName(a.strategy))];
        }
        return std::move(doc.text);
      };
      std::string rewritten =
          RewriteRecord(job.record.body, config_.input, csv_header, rewrite);
      outcome.output = mode == Mode::kMask ? std::move(rewritten) : std::move(report_lines);
      worker_reports[w] = merge_metrics(worker_reports[w], delta);
    } catch (const std::exception& e) {
      outcome.failed = true;
      outcome.reason = e.what();
      outcome.original = std::move(job.record.body);
      MetricsReport failed;
      failed.records_in = 1;
      failed.bytes_in = delta.bytes_in;
      failed.warnings["dead_letter"] = 1;
      worker_reports[w] = merge_metrics(worker_reports[w], failed);
    }
    return outcome;
  };

  std::uint64_t emitted = 0;
  auto sink = [&](Outcome outcome) {
    std::uint64_t index = emitted++;
    ++writer_report.records_out;
    std::string written;
    if (outcome.failed) {
      if (dead_letter != nullptr) {
        *dead_letter << nlohmann::json{{"record_index", index},
                                       {"reason", outcome.reason},
                                       {"record", outcome.original}}
                            .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
                     << '\n';
      }
      if (mode == Mode::kMask) {
        written = config_.input.format == InputFormat::kNdjson
                      ? nlohmann::json{{"maskron_dead_letter", index}}.dump()
                      : std::string("<DEAD_LETTER>");
        written += outcome.terminator;
      }
    } else if (mode == Mode::kMask) {
      written = std::move(outcome.output);
      written += outcome.terminator;
    } else {
      written = std::move(outcome.output);
    }
    writer_report.bytes_out += written.size();
    out << written;
    if (!out) throw Error(ErrorCode::kIoError, "output write failure");
  };

  RunOrdered(workers, std::max<std::size_t>(config_.queue_depth, workers),
             [&] { return reader.Next(); }, work, sink);
  out.flush();

  MetricsReport total = writer_report;
  for (const auto& r : worker_reports) total = merge_metrics(total, r);
  total.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return total;
}

MetricsReport run_mask(std::istream& in, std::ostream& out, const Config& config,
                       std::ostream* dead_letter) {
  return Pipeline(config).RunMask(in, out, dead_letter);
}

MetricsReport run_detect(std::istream& in, std::ostream& out, const Config& config,
                         std::ostream* dead_letter) {
  return Pipeline(config).RunDetect(in, out, dead_letter);
}

}  // namespace maskron
