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

#ifndef MASKRON_EVAL_H_
#define MASKRON_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "maskron/types.h"

namespace maskron {

struct GoldEntity {
  Span span;
  PiiType type;

  friend bool operator==(const GoldEntity&, const GoldEntity&) = default;
};

struct AnnotatedDoc {
  std::string text;
  // Sorted by start, pairwise non-overlapping.
  std::vector<GoldEntity> gold;

  friend bool operator==(const AnnotatedDoc&, const AnnotatedDoc&) = default;
};

// Corpus files are NDJSON, one document per line:
//   {"text": "...", "entities": [{"start": int, "end": int, "type": "..."}]}
// Blank lines are skipped. Throws Error(kParseError) or Error(kBadSpan); the
// message names the 1-based line.
std::vector<AnnotatedDoc> load_corpus(std::istream& in);
std::vector<AnnotatedDoc> load_corpus(const std::filesystem::path& path);
void WriteCorpus(std::ostream& out, std::span<const AnnotatedDoc> docs);

enum class MatchMode { kExact, kOverlap };

struct TypeScore {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

struct Metrics {
  std::map<PiiType, TypeScore> per_type;
  TypeScore micro;
};

// Precision tp/(tp+fp) and recall tp/(tp+fn) with 0/0 taken as 1.0; F1 is 0
// whenever precision + recall is 0.
TypeScore FinishScore(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// EXACT: a prediction is a true positive when some unmatched gold entity has
// the same span and type. OVERLAP: exact hits are taken first, then each
// remaining prediction (in span order) claims the leftmost unmatched gold
// entity of its type that it overlaps. Each gold entity matches at most once. Throws
// Error(kLengthMismatch) when the two lists differ in length.
Metrics score(std::span<const std::vector<Detection>> predictions,
              std::span<const AnnotatedDoc> gold, MatchMode mode);

nlohmann::json MetricsToJson(const Metrics& metrics);

struct SyntheticOptions {
  std::uint64_t seed = 42;
  std::size_t n_docs = 100;
  // Relative weights per type; types with weight 0 never appear. Supported:
  // PHONE_NUMBER, SSN, EMAIL, CREDIT_CARD, IP_ADDRESS, PERSON_NAME.
  std::map<PiiType, double> mix;
  std::size_t min_entities = 1;
  std::size_t max_entities = 3;
};

// The weights used when SyntheticOptions::mix is empty: every supported type
// at weight 1.
std::map<PiiType, double> DefaultSyntheticMix();

// Log-like lines with planted PII. Deterministic for a given seed on every
// platform. Throws Error(kInvalidArgument) for n_docs == 0, empty bounds or
// unsupported types.
std::vector<AnnotatedDoc> generate_synthetic_corpus(const SyntheticOptions& options);

// The 200 first names planted as PERSON_NAME, capitalized.
std::span<const std::string_view> BundledNames();

}  // namespace maskron

#endif  // MASKRON_EVAL_H_
