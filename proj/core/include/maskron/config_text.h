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

#ifndef MASKRON_CONFIG_TEXT_H_
#define MASKRON_CONFIG_TEXT_H_

#include <string_view>

#include <nlohmann/json.hpp>

namespace maskron {

// Parses the TOML subset used by maskron configuration files into a JSON
// tree:
//
//   # comment                         (anywhere outside a string)
//   [table.sub."QUOTED:KEY"]          table header
//   [[array.of.tables]]               appends a table to an array
//   key = value                       bare keys: [A-Za-z0-9_-]+; "quoted"
//   a.b = value                       dotted keys
//
// Values: "basic strings" (escapes \" \\ \/ \b \f \n \r \t \uXXXX
// \UXXXXXXXX), 'literal strings', true/false, decimal integers, floats
// (1.5, -2e-3) and arrays [v, v, ...] that may span lines and end with a
// trailing comma. Inline tables, dates and multi-line strings are not
// supported. Redefining a key is an error.
//
// Throws Error(kParseError) with the offending line number.
nlohmann::json ParseConfigText(std::string_view text);

}  // namespace maskron

#endif  // MASKRON_CONFIG_TEXT_H_
