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

#include "maskron/resolve.h"

#include <algorithm>
#include <iterator>
#include <map>

#include "maskron/error.h"

namespace maskron {
namespace {

std::size_t PrecedenceRank(const std::string& detector_id,
                           const Precedence& precedence) {
  for (std::size_t i = 0; i < precedence.size(); ++i) {
    const std::string& p = precedence[i];
    if (detector_id == p ||
        (detector_id.size() > p.size() && detector_id.starts_with(p) &&
         detector_id[p.size()] == ':')) {
      return i;
    }
  }
  return precedence.size();
}

// Overlapping detections must agree on every shared byte.
void CheckConsistentSources(std::vector<const Detection*> by_start) {
  std::sort(by_start.begin(), by_start.end(), [](const Detection* a, const Detection* b) {
    return a->span < b->span;
  });
  for (const Detection* d : by_start) {
    if (d->matched_text.size() != d->span.length()) {
      throw Error(ErrorCode::kMixedSources,
                  d->detector_id + ": matched_text length differs from span");
    }
  }
  for (std::size_t i = 0; i < by_start.size(); ++i) {
    const Detection& a = *by_start[i];
    for (std::size_t j = i + 1; j < by_start.size(); ++j) {
      const Detection& b = *by_start[j];
      if (b.span.start >= a.span.end) break;
      std::size_t lo = b.span.start;
      std::size_t hi = std::min(a.span.end, b.span.end);
      std::string_view sa(a.matched_text);
      std::string_view sb(b.matched_text);
      if (sa.substr(lo - a.span.start, hi - lo) != sb.substr(0, hi - lo)) {
        throw Error(ErrorCode::kMixedSources,
                    a.detector_id + " and " + b.detector_id +
                        " disagree about the text at [" + std::to_string(lo) + "," +
                        std::to_string(hi) + ")");
      }
    }
  }
}

}  // namespace

Precedence DefaultPrecedence() { return {"external", "regex", "bloom"}; }

bool Outranks(const Detection& a, const Detection& b, const Precedence& precedence) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
  std::size_t ra = PrecedenceRank(a.detector_id, precedence);
  std::size_t rb = PrecedenceRank(b.detector_id, precedence);
  if (ra != rb) return ra < rb;
  if (a.detector_id != b.detector_id) return a.detector_id < b.detector_id;
  if (a.span.start != b.span.start) return a.span.start < b.span.start;
  return a.pii_type < b.pii_type;
}

ResolveResult ResolveWithStats(std::span<const Detection> detections,
                               const PolicyTable& policy,
                               const Precedence& precedence) {
  std::vector<const Detection*> all;
  all.reserve(detections.size());
  for (const Detection& d : detections) all.push_back(&d);
  CheckConsistentSources(all);

  std::vector<const Detection*> candidates;
  for (const Detection* d : all) {
    if (d->confidence >= policy.ThresholdFor(d->pii_type)) candidates.push_back(d);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Detection* a, const Detection* b) {
              return Outranks(*a, *b, precedence);
            });

  ResolveResult result;
  // Kept spans keyed by start; they never overlap, so only the last one
  // starting before d.end can collide with d.
  std::map<std::size_t, const Detection*> kept;
  for (const Detection* d : candidates) {
    const Detection* blocker = nullptr;
    auto it = kept.lower_bound(d->span.end);
    if (it != kept.begin()) {
      const Detection* prev = std::prev(it)->second;
      if (spans_overlap(prev->span, d->span)) blocker = prev;
    }
    if (blocker == nullptr) {
      kept.emplace(d->span.start, d);
    } else if (blocker->span == d->span && blocker->pii_type != d->pii_type) {
      ++result.type_conflicts;
    }
  }
  result.kept.reserve(kept.size());
  for (const auto& [_, k] : kept) result.kept.push_back(*k);
  return result;
}

std::vector<Detection> resolve(std::span<const Detection> detections,
                               const PolicyTable& policy,
                               const Precedence& precedence) {
  return ResolveWithStats(detections, policy, precedence).kept;
}

}  // namespace maskron
