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

#ifndef MASKRON_DICTIONARY_DETECTOR_H_
#define MASKRON_DICTIONARY_DETECTOR_H_

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "maskron/bloom_filter.h"
#include "maskron/types.h"

namespace maskron {

enum class Normalization { kLowercase, kNone };

struct DictionaryConfig {
  // Appears in detector ids as "bloom:<name>".
  std::string name = "names";
  PiiType pii_type = PiiType::Parse(PiiType::kPersonName);
  Normalization normalization = Normalization::kLowercase;
  std::string token_pattern = "[A-Za-z]{2,}";
  double confidence = 0.8;
};

// ASCII lower-casing under kLowercase; bytes >= 0x80 are left alone.
std::string Normalize(std::string_view token, Normalization normalization);

// Reads one entry per non-blank line (surrounding whitespace trimmed), sizes a
// filter for the entry count at `target_fpr` and inserts each normalized
// entry. Throws Error(kEmptyDictionary) when there are no entries and
// Error(kIoError) on read failure or invalid UTF-8.
BloomFilter bloom_load_dictionary(std::istream& source,
                                  const DictionaryConfig& cfg,
                                  double target_fpr);
BloomFilter bloom_load_dictionary(const std::filesystem::path& path,
                                  const DictionaryConfig& cfg,
                                  double target_fpr);

// Read and write the BLM1 file format. Throw Error(kIoError) or
// Error(kCorruptFormat).
BloomFilter ReadFilterFile(const std::filesystem::path& path);
void WriteFilterFile(const std::filesystem::path& path, const BloomFilter& filter);

// Token-exact dictionary lookups backed by a frozen filter. Safe for
// concurrent Scan calls.
class DictionaryDetector {
 public:
  DictionaryDetector(BloomFilter filter, DictionaryConfig cfg);

  std::vector<Detection> Scan(std::string_view text) const;

  const BloomFilter& filter() const { return *filter_; }
  const DictionaryConfig& config() const { return cfg_; }

 private:
  struct TokenRegex;
  std::shared_ptr<const BloomFilter> filter_;
  DictionaryConfig cfg_;
  std::shared_ptr<const TokenRegex> token_regex_;
  std::string detector_id_;
};

std::vector<Detection> scan_dictionary(std::string_view text,
                                       const BloomFilter& filter,
                                       const DictionaryConfig& cfg);

}  // namespace maskron

#endif  // MASKRON_DICTIONARY_DETECTOR_H_
