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

#include "maskron/records.h"

#include <algorithm>
#include <istream>
#include <set>

#include <nlohmann/json.hpp>

#include "maskron/error.h"

namespace maskron {
namespace {

[[noreturn]] void ParseFail(const std::string& why) {
  throw Error(ErrorCode::kParseError, why);
}

// Locates string literals inside one JSON text whose key path is selected.
class JsonLocator {
 public:
  struct Slot {
    std::string path;
    std::size_t start;  // opening quote
    std::size_t end;    // one past the closing quote
  };

  JsonLocator(std::string_view text, const std::set<std::string>& paths)
      : text_(text), paths_(paths) {}

  std::vector<Slot> Run() {
    SkipWs();
    Value("", false);
    SkipWs();
    if (pos_ != text_.size()) ParseFail("trailing bytes after JSON value");
    return std::move(slots_);
  }

 private:
  void SkipWs() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  std::size_t StringEnd(std::size_t open) const {
    std::size_t i = open + 1;
    while (i < text_.size()) {
      char c = text_[i];
      if (c == '\\') {
        i += 2;
        continue;
      }
      if (c == '"') return i + 1;
      ++i;
    }
    ParseFail("unterminated JSON string");
  }

  void Value(const std::string& path, bool selected) {
    if (pos_ >= text_.size()) ParseFail("unexpected end of JSON");
    char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      SkipWs();
      if (pos_ < text_.size() && text_[pos_] == '}') {
        ++pos_;
        return;
      }
      while (true) {
        SkipWs();
        if (pos_ >= text_.size() || text_[pos_] != '"') ParseFail("expected object key");
        std::size_t key_end = StringEnd(pos_);
        std::string key = nlohmann::json::parse(text_.substr(pos_, key_end - pos_))
                              .get<std::string>();
        pos_ = key_end;
        SkipWs();
        if (pos_ >= text_.size() || text_[pos_] != ':') ParseFail("expected ':'");
        ++pos_;
        SkipWs();
        std::string child = path.empty() ? key : path + "." + key;
        Value(child, paths_.contains(child));
        SkipWs();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == '}') {
          ++pos_;
          return;
        }
        ParseFail("expected ',' or '}'");
      }
    }
    if (c == '[') {
      ++pos_;
      SkipWs();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return;
      }
      while (true) {
        SkipWs();
        Value(path, selected);
        SkipWs();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return;
        }
        ParseFail("expected ',' or ']'");
      }
    }
    if (c == '"') {
      std::size_t end = StringEnd(pos_);
      if (selected) slots_.push_back(Slot{path, pos_, end});
      pos_ = end;
      return;
    }
    // Scalars are validated by the full parse that precedes this walk.
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' &&
           text_[pos_] != ']' && text_[pos_] != ' ' && text_[pos_] != '\t' &&
           text_[pos_] != '\r' && text_[pos_] != '\n') {
      ++pos_;
    }
  }

  std::string_view text_;
  const std::set<std::string>& paths_;
  std::size_t pos_ = 0;
  std::vector<Slot> slots_;
};

struct CsvCell {
  std::size_t start;  // raw byte range, including quotes
  std::size_t end;
  bool quoted;
  std::string value;
};

std::vector<CsvCell> SplitCsv(std::string_view body) {
  std::vector<CsvCell> cells;
  std::size_t i = 0;
  while (true) {
    CsvCell cell{i, i, false, {}};
    if (i < body.size() && body[i] == '"') {
      cell.quoted = true;
      ++i;
      while (true) {
        if (i >= body.size()) ParseFail("unterminated quoted CSV cell");
        if (body[i] == '"') {
          if (i + 1 < body.size() && body[i + 1] == '"') {
            cell.value.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        cell.value.push_back(body[i++]);
      }
      if (i < body.size() && body[i] != ',') ParseFail("text after closing quote in CSV cell");
    } else {
      while (i < body.size() && body[i] != ',') {
        if (body[i] == '"') ParseFail("quote inside unquoted CSV cell");
        cell.value.push_back(body[i++]);
      }
    }
    cell.end = i;
    cells.push_back(std::move(cell));
    if (i >= body.size()) break;
    ++i;  // comma
  }
  return cells;
}

std::string EncodeCsvCell(std::string_view value, bool force_quotes) {
  bool needs = force_quotes || value.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::size_t CsvColumnIndex(const std::string& column,
                           const std::vector<std::string>& header) {
  if (!header.empty()) {
    auto it = std::find(header.begin(), header.end(), column);
    return it == header.end() ? std::string::npos
                              : static_cast<std::size_t>(it - header.begin());
  }
  return static_cast<std::size_t>(std::stoul(column));
}

}  // namespace

bool RecordReader::ReadLine(std::string& line, std::string& terminator) {
  line.clear();
  terminator.clear();
  if (!std::getline(in_, line)) return false;
  if (in_.eof()) {
    terminator = "";
  } else {
    terminator = "\n";
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
      terminator = "\r\n";
    }
  }
  return true;
}

std::optional<RawRecord> RecordReader::Next() {
  RawRecord rec;
  if (!ReadLine(rec.body, rec.terminator)) {
    if (in_.bad()) throw Error(ErrorCode::kIoError, "input read failure");
    return std::nullopt;
  }
  // Guard against a final empty "line" produced by a trailing newline.
  if (rec.body.empty() && rec.terminator.empty()) return std::nullopt;
  if (format_ == InputFormat::kCsv) {
    auto quotes = std::count(rec.body.begin(), rec.body.end(), '"');
    std::string line;
    std::string term;
    while (quotes % 2 == 1 && !rec.terminator.empty() && ReadLine(line, term)) {
      rec.body += rec.terminator;
      rec.body += line;
      rec.terminator = term;
      quotes += std::count(line.begin(), line.end(), '"');
    }
  }
  return rec;
}

std::vector<std::string> ParseCsvRecord(std::string_view body) {
  std::vector<std::string> out;
  for (auto& cell : SplitCsv(body)) out.push_back(std::move(cell.value));
  return out;
}

std::string RewriteRecord(std::string_view body, const InputConfig& input,
                          const std::vector<std::string>& csv_header,
                          const FieldRewriter& rewrite) {
  switch (input.format) {
    case InputFormat::kTextLines:
      return rewrite("", body);

    case InputFormat::kNdjson: {
      if (body.find_first_not_of(" \t") == std::string_view::npos) {
        return std::string(body);
      }
      if (!nlohmann::json::accept(body)) ParseFail("record is not valid JSON");
      std::set<std::string> paths(input.fields.begin(), input.fields.end());
      auto slots = JsonLocator(body, paths).Run();
      std::string out;
      out.reserve(body.size());
      std::size_t pos = 0;
      for (const auto& slot : slots) {
        out.append(body.substr(pos, slot.start - pos));
        std::string value =
            nlohmann::json::parse(body.substr(slot.start, slot.end - slot.start))
                .get<std::string>();
        std::string masked = rewrite(slot.path, value);
        if (masked == value) {
          out.append(body.substr(slot.start, slot.end - slot.start));
        } else {
          out += nlohmann::json(masked).dump();
        }
        pos = slot.end;
      }
      out.append(body.substr(pos));
      return out;
    }

    case InputFormat::kCsv: {
      auto cells = SplitCsv(body);
      std::vector<bool> scan(cells.size(), false);
      std::vector<std::string> names(cells.size());
      for (const auto& column : input.columns) {
        std::size_t idx = CsvColumnIndex(column, csv_header);
        if (idx < cells.size()) {
          scan[idx] = true;
          names[idx] = column;
        }
      }
      std::string out;
      out.reserve(body.size());
      std::size_t pos = 0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!scan[i]) continue;
        const CsvCell& cell = cells[i];
        std::string masked = rewrite(names[i], cell.value);
        if (masked == cell.value) continue;
        out.append(body.substr(pos, cell.start - pos));
        out += EncodeCsvCell(masked, cell.quoted);
        pos = cell.end;
      }
      out.append(body.substr(pos));
      return out;
    }
  }
  return std::string(body);
}

}  // namespace maskron
