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

#ifndef MASKRON_TESTS_SUPPORT_RESOLVE_ORACLE_H_
#define MASKRON_TESTS_SUPPORT_RESOLVE_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "maskron/resolve.h"
#include "maskron/types.h"

namespace maskron::testing {

// Independent oracle: rank detections by the documented key, enumerate every
// non-overlapping subset of the above-threshold candidates and keep the one
// whose rank-sorted sequence is lexicographically greatest.
struct ResolveOracle {
  Precedence precedence;

  std::size_t Rank(const std::string& id) const {
    for (std::size_t i = 0; i < precedence.size(); ++i) {
      const std::string& p = precedence[i];
      if (id == p || id.rfind(p + ":", 0) == 0) return i;
    }
    return precedence.size();
  }

  // Smaller key means higher priority.
  auto Key(const Detection& d) const {
    return std::make_tuple(-d.confidence, -static_cast<long>(d.span.length()), Rank(d.detector_id),
                           d.detector_id, d.span.start, d.pii_type.name());
  }

  std::vector<Detection> Solve(const std::vector<Detection>& all, const PolicyTable& policy) const {
    std::vector<Detection> cand;
    for (const Detection& d : all) {
      if (d.confidence >= policy.ThresholdFor(d.pii_type)) cand.push_back(d);
    }
    std::sort(cand.begin(), cand.end(),
              [&](const Detection& a, const Detection& b) { return Key(a) < Key(b); });
    std::vector<std::size_t> best;
    for (std::uint32_t mask = 0; mask < (1u << cand.size()); ++mask) {
      std::vector<std::size_t> chosen;
      bool ok = true;
      for (std::size_t i = 0; i < cand.size() && ok; ++i) {
        if (!(mask & (1u << i))) continue;
        for (std::size_t j : chosen) {
          if (cand[i].span.start < cand[j].span.end && cand[j].span.start < cand[i].span.end) {
            ok = false;
          }
        }
        chosen.push_back(i);
      }
      if (!ok) continue;
      // `chosen` is already in priority order; a lower index is better and a
      // proper extension beats its prefix.
      if (std::lexicographical_compare(best.begin(), best.end(), chosen.begin(), chosen.end(),
                                       [](std::size_t a, std::size_t b) { return a > b; })) {
        best = chosen;
      }
    }
    std::vector<Detection> out;
    for (std::size_t i : best) out.push_back(cand[i]);
    std::sort(out.begin(), out.end(),
              [](const Detection& a, const Detection& b) { return a.span.start < b.span.start; });
    return out;
  }
};

}  // namespace maskron::testing

#endif  // MASKRON_TESTS_SUPPORT_RESOLVE_ORACLE_H_
