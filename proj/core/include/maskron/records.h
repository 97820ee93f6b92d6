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

#ifndef MASKRON_RECORDS_H_
#define MASKRON_RECORDS_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maskron {

enum class InputFormat { kTextLines, kNdjson, kCsv };

struct InputConfig {
  InputFormat format = InputFormat::kTextLines;
  // NDJSON: dotted paths of string fields to scan ("user.email"). A path that
  // ends in an array scans every string element.
  std::vector<std::string> fields;
  // CSV: column names (with a header row) or 0-based indices (without).
  std::vector<std::string> columns;
  bool csv_header = true;
};

// One input record and the line terminator that followed it ("\n", "\r\n"
// or "" at end of input).
struct RawRecord {
  std::string body;
  std::string terminator;
};

// Splits a byte stream into records. CSV records may span lines when a
// quoted cell contains a newline.
class RecordReader {
 public:
  RecordReader(std::istream& in, InputFormat format) : in_(in), format_(format) {}
  std::optional<RawRecord> Next();

 private:
  bool ReadLine(std::string& line, std::string& terminator);
  std::istream& in_;
  InputFormat format_;
};

// Called once per scannable text value; returns the replacement text.
// `field` is empty for plain text lines, the dotted path for NDJSON and the
// column name for CSV.
using FieldRewriter =
    std::function<std::string(std::string_view field, std::string_view text)>;

// Rewrites the scannable values of one record body and copies every other
// byte unchanged. Throws Error(kParseError) for malformed NDJSON or CSV.
std::string RewriteRecord(std::string_view body, const InputConfig& input,
                          const std::vector<std::string>& csv_header,
                          const FieldRewriter& rewrite);

// Splits a CSV record into decoded cells. Throws Error(kParseError).
std::vector<std::string> ParseCsvRecord(std::string_view body);

}  // namespace maskron

#endif  // MASKRON_RECORDS_H_
