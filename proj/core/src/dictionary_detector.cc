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

#include "maskron/dictionary_detector.h"

#include <fstream>
#include <istream>
#include <iterator>

#include <boost/regex.hpp>

#include "maskron/error.h"

namespace maskron {

struct DictionaryDetector::TokenRegex {
  boost::regex regex;
};

namespace {

std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string Normalize(std::string_view token, Normalization normalization) {
  std::string out(token);
  if (normalization == Normalization::kLowercase) {
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  return out;
}

BloomFilter bloom_load_dictionary(std::istream& source,
                                  const DictionaryConfig& cfg,
                                  double target_fpr) {
  std::vector<std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!IsValidUtf8(line)) {
      throw Error(ErrorCode::kIoError,
                  "dictionary line " + std::to_string(line_no) + " is not valid UTF-8");
    }
    std::string_view entry = Trim(line);
    if (entry.empty()) continue;
    entries.push_back(Normalize(entry, cfg.normalization));
  }
  if (source.bad()) throw Error(ErrorCode::kIoError, "read failure");
  if (entries.empty()) throw Error(ErrorCode::kEmptyDictionary, cfg.name);

  BloomFilter filter = BloomFilter::Create(entries.size(), target_fpr);
  for (const auto& e : entries) filter.Insert(e);
  return filter;
}

BloomFilter bloom_load_dictionary(const std::filesystem::path& path,
                                  const DictionaryConfig& cfg,
                                  double target_fpr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return bloom_load_dictionary(in, cfg, target_fpr);
}

BloomFilter ReadFilterFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failure on " + path.string());
  return BloomFilter::Deserialize(bytes);
}

void WriteFilterFile(const std::filesystem::path& path, const BloomFilter& filter) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  std::string bytes = filter.Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failure on " + path.string());
}

DictionaryDetector::DictionaryDetector(BloomFilter filter, DictionaryConfig cfg)
    : filter_(std::make_shared<const BloomFilter>(std::move(filter))),
      cfg_(std::move(cfg)),
      detector_id_("bloom:" + cfg_.name) {
  if (!(cfg_.confidence >= 0.0 && cfg_.confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "dictionary confidence out of [0,1]: " + std::to_string(cfg_.confidence));
  }
  try {
    token_regex_ = std::make_shared<const TokenRegex>(
        TokenRegex{boost::regex(cfg_.token_pattern, boost::regex::perl)});
  } catch (const boost::regex_error& e) {
    throw Error(ErrorCode::kBadPattern, "bloom:" + cfg_.name + ": " + e.what());
  }
}

std::vector<Detection> DictionaryDetector::Scan(std::string_view text) const {
  std::vector<Detection> out;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  boost::cregex_iterator it(begin, end, token_regex_->regex,
                            boost::match_posix | boost::match_not_null);
  for (; it != boost::cregex_iterator(); ++it) {
    const auto& m = (*it)[0];
    Span span{static_cast<std::size_t>(m.first - begin),
              static_cast<std::size_t>(m.second - begin)};
    if (!IsCharBoundary(text, span.start) || !IsCharBoundary(text, span.end)) {
      continue;
    }
    std::string_view token = text.substr(span.start, span.length());
    if (filter_->MightContain(Normalize(token, cfg_.normalization))) {
      out.push_back(Detection{span, cfg_.pii_type, cfg_.confidence, detector_id_,
                              std::string(token)});
    }
  }
  return out;
}

std::vector<Detection> scan_dictionary(std::string_view text,
                                       const BloomFilter& filter,
                                       const DictionaryConfig& cfg) {
  return DictionaryDetector(filter, cfg).Scan(text);
}

}  // namespace maskron
