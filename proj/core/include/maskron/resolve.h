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

#ifndef MASKRON_RESOLVE_H_
#define MASKRON_RESOLVE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maskron/types.h"

namespace maskron {

// Detector id prefixes in priority order, e.g. {"external", "regex", "bloom"}.
// A detector matches the first entry that equals its id or prefixes it
// followed by ':'.
using Precedence = std::vector<std::string>;

Precedence DefaultPrecedence();

// Strict total order used to arbitrate overlaps: higher confidence, then
// longer span, then earlier precedence entry, then smaller detector_id, then
// earlier start, then smaller type name. Returns true when `a` wins.
bool Outranks(const Detection& a, const Detection& b, const Precedence& precedence);

struct ResolveResult {
  std::vector<Detection> kept;
  // Dropped detections that covered exactly a kept span but named a
  // different type.
  std::size_t type_conflicts = 0;
};

// Drops detections below their type's threshold, then greedily keeps the
// highest-ranked detections that do not overlap anything already kept.
// Output is sorted by span start. Throws Error(kMixedSources) if two
// detections disagree about the bytes they share.
ResolveResult ResolveWithStats(std::span<const Detection> detections,
                               const PolicyTable& policy,
                               const Precedence& precedence);

std::vector<Detection> resolve(std::span<const Detection> detections,
                               const PolicyTable& policy,
                               const Precedence& precedence);

}  // namespace maskron

#endif  // MASKRON_RESOLVE_H_
