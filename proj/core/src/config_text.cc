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

#include "maskron/config_text.h"

#include <charconv>
#include <set>
#include <string>
#include <vector>

#include "maskron/error.h"

namespace maskron {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  nlohmann::json Run() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* current = &root;
    while (true) {
      SkipBlankAndComments();
      if (AtEnd()) break;
      if (Peek() == '[') {
        current = ParseHeader(root);
      } else {
        ParseKeyValue(*current);
      }
      ExpectLineEnd();
    }
    return root;
  }

 private:
  [[noreturn]] void Fail(const std::string& why) const {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_) + ": " + why);
  }

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char Next() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void SkipSpaces() {
    while (!AtEnd() && (Peek() == ' ' || Peek() == '\t')) ++pos_;
  }

  void SkipComment() {
    if (Peek() == '#') {
      while (!AtEnd() && Peek() != '\n') ++pos_;
    }
  }

  void SkipBlankAndComments() {
    while (!AtEnd()) {
      SkipSpaces();
      SkipComment();
      if (Peek() == '\r' && Peek(1) == '\n') ++pos_;
      if (Peek() == '\n') {
        Next();
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void SkipArrayFiller() {
    while (!AtEnd()) {
      SkipSpaces();
      SkipComment();
      if (Peek() == '\r' || Peek() == '\n') {
        Next();
        continue;
      }
      break;
    }
  }

  void ExpectLineEnd() {
    SkipSpaces();
    SkipComment();
    if (AtEnd()) return;
    if (Peek() == '\r' && Peek(1) == '\n') ++pos_;
    if (Peek() != '\n') Fail(std::string("unexpected '") + Peek() + "'");
    Next();
  }

  static bool IsBareKeyChar(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  }

  std::vector<std::string> ParseDottedKey() {
    std::vector<std::string> parts;
    while (true) {
      SkipSpaces();
      if (Peek() == '"') {
        parts.push_back(ParseBasicString());
      } else if (Peek() == '\'') {
        parts.push_back(ParseLiteralString());
      } else {
        std::size_t start = pos_;
        while (!AtEnd() && IsBareKeyChar(Peek())) ++pos_;
        if (start == pos_) Fail("expected a key");
        parts.emplace_back(text_.substr(start, pos_ - start));
      }
      SkipSpaces();
      if (Peek() != '.') break;
      ++pos_;
    }
    return parts;
  }

  // Walks to (creating) the table at `path`; an array of tables resolves to
  // its last element.
  nlohmann::json* Descend(nlohmann::json& root, const std::vector<std::string>& path,
                          std::size_t count, std::string* canonical = nullptr) {
    nlohmann::json* node = &root;
    for (std::size_t i = 0; i < count; ++i) {
      nlohmann::json& child = (*node)[path[i]];
      if (canonical != nullptr) *canonical += "\x1f" + path[i];
      if (child.is_null()) child = nlohmann::json::object();
      if (child.is_array()) {
        if (child.empty() || !child.back().is_object()) {
          Fail("'" + path[i] + "' is not a table");
        }
        if (canonical != nullptr) *canonical += "#" + std::to_string(child.size());
        node = &child.back();
      } else if (child.is_object()) {
        node = &child;
      } else {
        Fail("'" + path[i] + "' is already a value");
      }
    }
    return node;
  }

  nlohmann::json* ParseHeader(nlohmann::json& root) {
    ++pos_;
    bool array = Peek() == '[';
    if (array) ++pos_;
    std::vector<std::string> path = ParseDottedKey();
    if (Peek() != ']') Fail("expected ']'");
    ++pos_;
    if (array) {
      if (Peek() != ']') Fail("expected ']]'");
      ++pos_;
    }
    std::string canonical;
    nlohmann::json* parent = Descend(root, path, path.size() - 1, &canonical);
    canonical += "\x1f" + path.back();
    nlohmann::json& leaf = (*parent)[path.back()];
    if (array) {
      if (leaf.is_null()) leaf = nlohmann::json::array();
      if (!leaf.is_array()) Fail("'" + path.back() + "' is not an array of tables");
      leaf.push_back(nlohmann::json::object());
      return &leaf.back();
    }
    if (leaf.is_null()) {
      leaf = nlohmann::json::object();
    } else if (!leaf.is_object()) {
      Fail("'" + path.back() + "' is already a value");
    } else if (defined_tables_.contains(canonical)) {
      Fail("table '" + path.back() + "' defined twice");
    }
    defined_tables_.insert(canonical);
    return &leaf;
  }

  void ParseKeyValue(nlohmann::json& table) {
    std::vector<std::string> path = ParseDottedKey();
    if (Peek() != '=') Fail("expected '=' after key");
    ++pos_;
    SkipSpaces();
    nlohmann::json* parent = Descend(table, path, path.size() - 1);
    if (parent->contains(path.back())) Fail("key '" + path.back() + "' defined twice");
    (*parent)[path.back()] = ParseValue();
  }

  nlohmann::json ParseValue() {
    char c = Peek();
    if (c == '"') return ParseBasicString();
    if (c == '\'') return ParseLiteralString();
    if (c == '[') return ParseArray();
    if (text_.substr(pos_).starts_with("true") && !IsBareKeyChar(Peek(4))) {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_).starts_with("false") && !IsBareKeyChar(Peek(5))) {
      pos_ += 5;
      return false;
    }
    return ParseNumber();
  }

  nlohmann::json ParseNumber() {
    std::size_t start = pos_;
    while (!AtEnd()) {
      char c = Peek();
      bool ok = (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' ||
                c == 'e' || c == 'E';
      if (!ok) break;
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token.empty()) Fail("expected a value");
    std::string digits = token[0] == '+' ? token.substr(1) : token;
    bool is_float = digits.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        Fail("bad integer '" + token + "'");
      }
      return v;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(digits, &used);
      if (used != digits.size()) Fail("bad number '" + token + "'");
      return v;
    } catch (const std::logic_error&) {
      Fail("bad number '" + token + "'");
    }
  }

  nlohmann::json ParseArray() {
    ++pos_;
    nlohmann::json arr = nlohmann::json::array();
    while (true) {
      SkipArrayFiller();
      if (AtEnd()) Fail("unterminated array");
      if (Peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(ParseValue());
      SkipArrayFiller();
      if (Peek() == ',') {
        ++pos_;
      } else if (Peek() != ']') {
        Fail("expected ',' or ']' in array");
      }
    }
  }

  std::string ParseLiteralString() {
    ++pos_;
    std::size_t start = pos_;
    while (!AtEnd() && Peek() != '\'') {
      if (Peek() == '\n') Fail("newline in string");
      ++pos_;
    }
    if (AtEnd()) Fail("unterminated string");
    std::string out(text_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  static void AppendUtf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::string ParseBasicString() {
    ++pos_;
    std::string out;
    while (true) {
      if (AtEnd()) Fail("unterminated string");
      char c = Peek();
      if (c == '\n') Fail("newline in string");
      ++pos_;
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (AtEnd()) Fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case '/': out.push_back('/'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u':
        case 'U': {
          std::size_t n = e == 'u' ? 4 : 8;
          if (pos_ + n > text_.size()) Fail("short unicode escape");
          std::uint32_t cp = 0;
          auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + pos_ + n, cp, 16);
          if (ec != std::errc() || ptr != text_.data() + pos_ + n ||
              cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            Fail("bad unicode escape");
          }
          pos_ += n;
          AppendUtf8(out, cp);
          break;
        }
        default:
          Fail(std::string("unknown escape \\") + e);
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::set<std::string> defined_tables_;
};

}  // namespace

nlohmann::json ParseConfigText(std::string_view text) { return Parser(text).Run(); }

}  // namespace maskron
