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

#include "maskron/config.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "maskron/config_text.h"
#include "maskron/error.h"

namespace maskron {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void Invalid(const std::string& why) {
  throw Error(ErrorCode::kValidationError, why);
}

void CheckKeys(const json& table, const std::string& where,
               std::initializer_list<std::string_view> allowed) {
  if (!table.is_object()) Invalid(where + " must be a table");
  for (const auto& [key, _] : table.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) Invalid("unknown key '" + key + "' in " + where);
  }
}

const json* Find(const json& table, const char* key) {
  auto it = table.find(key);
  return it == table.end() ? nullptr : &*it;
}

std::string GetString(const json& table, const char* key, const std::string& where,
                      std::optional<std::string> fallback = std::nullopt) {
  const json* v = Find(table, key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    Invalid(where + "." + key + " is required");
  }
  if (!v->is_string()) Invalid(where + "." + key + " must be a string");
  return v->get<std::string>();
}

double GetNumber(const json& table, const char* key, const std::string& where,
                 double fallback) {
  const json* v = Find(table, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) Invalid(where + "." + key + " must be a number");
  return v->get<double>();
}

long long GetInt(const json& table, const char* key, const std::string& where,
                 long long fallback) {
  const json* v = Find(table, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer()) Invalid(where + "." + key + " must be an integer");
  return v->get<long long>();
}

bool GetBool(const json& table, const char* key, const std::string& where, bool fallback) {
  const json* v = Find(table, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) Invalid(where + "." + key + " must be true or false");
  return v->get<bool>();
}

std::vector<std::string> GetStrings(const json& table, const char* key,
                                    const std::string& where) {
  std::vector<std::string> out;
  const json* v = Find(table, key);
  if (v == nullptr) return out;
  if (!v->is_array()) Invalid(where + "." + key + " must be an array");
  for (const auto& e : *v) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_unsigned() || e.is_number_integer()) {
      out.push_back(std::to_string(e.get<long long>()));
    } else {
      Invalid(where + "." + key + " must hold strings");
    }
  }
  return out;
}

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void RequireFile(const fs::path& path, const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) Invalid(what + " not found: " + path.string());
}

InputConfig ParseInput(const json& t) {
  CheckKeys(t, "input", {"format", "fields", "columns", "header"});
  InputConfig in;
  std::string format = GetString(t, "format", "input", "text");
  if (format == "text") {
    in.format = InputFormat::kTextLines;
  } else if (format == "ndjson") {
    in.format = InputFormat::kNdjson;
  } else if (format == "csv") {
    in.format = InputFormat::kCsv;
  } else {
    Invalid("input.format must be text, ndjson or csv");
  }
  in.fields = GetStrings(t, "fields", "input");
  in.columns = GetStrings(t, "columns", "input");
  in.csv_header = GetBool(t, "header", "input", true);
  if (in.format == InputFormat::kNdjson && in.fields.empty()) {
    Invalid("ndjson input needs at least one entry in input.fields");
  }
  if (in.format == InputFormat::kCsv) {
    if (in.columns.empty()) Invalid("csv input needs at least one entry in input.columns");
    if (!in.csv_header) {
      for (const auto& c : in.columns) {
        if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos) {
          Invalid("without a header, input.columns must be 0-based indices");
        }
      }
    }
  }
  return in;
}

Validator ParseValidator(const std::string& name, const std::string& where) {
  if (name == "none") return Validator::kNone;
  if (name == "luhn") return Validator::kLuhn;
  Invalid(where + ".validator must be luhn or none");
}

std::vector<RegexRuleSource> ParseRegexRules(const json& t) {
  CheckKeys(t, "detectors.regex", {"enabled", "builtin", "rules"});
  std::vector<RegexRuleSource> rules;
  if (GetBool(t, "builtin", "detectors.regex", true)) rules = DefaultRegexRules();
  std::set<std::string> custom_ids;
  if (const json* list = Find(t, "rules")) {
    if (!list->is_array()) Invalid("detectors.regex.rules must be an array of tables");
    for (const auto& r : *list) {
      const std::string where = "detectors.regex.rules";
      CheckKeys(r, where,
                {"id", "type", "pattern", "confidence", "validator",
                 "validated_confidence", "word_boundaries"});
      RegexRuleSource src;
      src.id = GetString(r, "id", where);
      src.pii_type = GetString(r, "type", where);
      src.pattern = GetString(r, "pattern", where);
      src.base_confidence = GetNumber(r, "confidence", where, 0.5);
      src.validator = ParseValidator(GetString(r, "validator", where, "none"), where);
      if (Find(r, "validated_confidence") != nullptr) {
        src.validated_confidence = GetNumber(r, "validated_confidence", where, 0.0);
      }
      src.word_boundaries = GetBool(r, "word_boundaries", where, true);
      if (!custom_ids.insert(src.id).second) throw Error(ErrorCode::kDuplicateRuleId, src.id);
      // A configured rule with a built-in id replaces the built-in tier.
      auto same = std::find_if(rules.begin(), rules.end(),
                               [&](const RegexRuleSource& b) { return b.id == src.id; });
      if (same != rules.end()) {
        *same = std::move(src);
      } else {
        rules.push_back(std::move(src));
      }
    }
  }
  return rules;
}

std::shared_ptr<const DictionaryDetector> ParseDictionary(const json& t,
                                                          const fs::path& base) {
  const std::string where = "detectors.dictionary";
  CheckKeys(t, where,
            {"name", "type", "source", "filter", "fpr", "normalization", "token_pattern",
             "confidence"});
  DictionaryConfig cfg;
  cfg.name = GetString(t, "name", where);
  cfg.pii_type = PiiType::Parse(GetString(t, "type", where, "PERSON_NAME"));
  std::string norm = GetString(t, "normalization", where, "lowercase");
  if (norm == "lowercase") {
    cfg.normalization = Normalization::kLowercase;
  } else if (norm == "none") {
    cfg.normalization = Normalization::kNone;
  } else {
    Invalid(where + ".normalization must be lowercase or none");
  }
  cfg.token_pattern = GetString(t, "token_pattern", where, cfg.token_pattern);
  cfg.confidence = GetNumber(t, "confidence", where, cfg.confidence);
  if (!(cfg.confidence >= 0.0 && cfg.confidence <= 1.0)) {
    Invalid(where + ".confidence must lie in [0, 1]");
  }
  const json* source = Find(t, "source");
  const json* filter = Find(t, "filter");
  if ((source == nullptr) == (filter == nullptr)) {
    Invalid(where + " '" + cfg.name + "' needs exactly one of source or filter");
  }
  if (filter != nullptr) {
    fs::path path = Resolve(base, GetString(t, "filter", where));
    RequireFile(path, "dictionary filter");
    return std::make_shared<const DictionaryDetector>(ReadFilterFile(path), cfg);
  }
  fs::path path = Resolve(base, GetString(t, "source", where));
  RequireFile(path, "dictionary source");
  double fpr = GetNumber(t, "fpr", where, 0.001);
  return std::make_shared<const DictionaryDetector>(bloom_load_dictionary(path, cfg, fpr),
                                                    cfg);
}

ExternalEndpoint ParseEndpoint(const json& t) {
  const std::string where = "detectors.external";
  CheckKeys(t, where,
            {"name", "url", "timeout_ms", "max_retries", "confidence_floor", "api_key_env",
             "external_data_leaves_boundary", "backoff_ms", "max_in_flight"});
  ExternalEndpoint ep;
  ep.name = GetString(t, "name", where);
  ep.url = GetString(t, "url", where);
  ep.timeout_ms = static_cast<int>(GetInt(t, "timeout_ms", where, ep.timeout_ms));
  ep.max_retries = static_cast<int>(GetInt(t, "max_retries", where, ep.max_retries));
  ep.confidence_floor = GetNumber(t, "confidence_floor", where, ep.confidence_floor);
  ep.api_key_env = GetString(t, "api_key_env", where, "");
  ep.data_leaves_boundary = GetBool(t, "external_data_leaves_boundary", where, false);
  ep.backoff_base_ms = static_cast<int>(GetInt(t, "backoff_ms", where, ep.backoff_base_ms));
  ep.max_in_flight = static_cast<int>(GetInt(t, "max_in_flight", where, ep.max_in_flight));
  if (!ep.data_leaves_boundary) {
    Invalid("external detector '" + ep.name +
            "' sends documents off-host; set external_data_leaves_boundary = true to "
            "acknowledge");
  }
  ValidateEndpoint(ep);
  return ep;
}

}  // namespace

Config DefaultConfig() {
  Config c;
  c.regex_rules = RuleSet::Compile(DefaultRegexRules());
  return c;
}

Config BuildConfig(const json& tree, const fs::path& base_dir, const LoadOptions& options) {
  CheckKeys(tree, "config", {"input", "pipeline", "detectors", "policy"});
  Config c;

  if (const json* input = Find(tree, "input")) c.input = ParseInput(*input);

  if (const json* p = Find(tree, "pipeline")) {
    CheckKeys(*p, "pipeline",
              {"parallelism", "queue_depth", "keyring", "metrics", "dead_letter"});
    long long parallelism = GetInt(*p, "parallelism", "pipeline", 1);
    if (parallelism < 1 || parallelism > 1024) {
      Invalid("pipeline.parallelism must lie in [1, 1024]");
    }
    c.parallelism = static_cast<std::size_t>(parallelism);
    long long depth = GetInt(*p, "queue_depth", "pipeline", 256);
    if (depth < 1) Invalid("pipeline.queue_depth must be >= 1");
    c.queue_depth = static_cast<std::size_t>(depth);
    if (Find(*p, "keyring")) c.keyring_path = Resolve(base_dir, GetString(*p, "keyring", "pipeline"));
    if (Find(*p, "metrics")) c.metrics_path = Resolve(base_dir, GetString(*p, "metrics", "pipeline"));
    if (Find(*p, "dead_letter")) {
      c.dead_letter_path = Resolve(base_dir, GetString(*p, "dead_letter", "pipeline"));
    }
  }

  if (options.keyring_override) {
    c.keyring_path = *options.keyring_override;
  } else if (!c.keyring_path && options.use_environment) {
    if (const char* env = std::getenv(kKeyringEnvVar); env != nullptr && *env != '\0') {
      c.keyring_path = fs::path(env);
    }
  }
  if (c.keyring_path) {
    RequireFile(*c.keyring_path, "keyring");
    c.keyring = std::make_shared<const Keyring>(Keyring::Load(*c.keyring_path));
  }

  std::vector<RegexRuleSource> rules = DefaultRegexRules();
  if (const json* d = Find(tree, "detectors")) {
    CheckKeys(*d, "detectors", {"regex", "dictionary", "external"});
    if (const json* r = Find(*d, "regex")) {
      c.regex_enabled = GetBool(*r, "enabled", "detectors.regex", true);
      rules = ParseRegexRules(*r);
    }
    if (const json* dicts = Find(*d, "dictionary")) {
      if (!dicts->is_array()) Invalid("detectors.dictionary must be an array of tables");
      std::set<std::string> names;
      for (const auto& t : *dicts) {
        auto det = ParseDictionary(t, base_dir);
        if (!names.insert(det->config().name).second) {
          Invalid("duplicate dictionary name " + det->config().name);
        }
        c.dictionaries.push_back(std::move(det));
      }
    }
    if (const json* ext = Find(*d, "external")) {
      if (!ext->is_array()) Invalid("detectors.external must be an array of tables");
      std::set<std::string> names;
      for (const auto& t : *ext) {
        ExternalEndpoint ep = ParseEndpoint(t);
        if (!names.insert(ep.name).second) Invalid("duplicate external detector " + ep.name);
        c.external.push_back(std::move(ep));
      }
    }
  }
  c.regex_rules = RuleSet::Compile(c.regex_enabled ? rules : std::vector<RegexRuleSource>{});

  if (const json* policy = Find(tree, "policy")) {
    CheckKeys(*policy, "policy", {"default_threshold", "default_strategy", "types", "precedence"});
    c.policy = validate_policy(*policy, c.keyring->ids());
    if (Find(*policy, "precedence")) c.precedence = GetStrings(*policy, "precedence", "policy");
  }
  return c;
}

Config ParseConfig(std::string_view text, const fs::path& base_dir,
                   const LoadOptions& options) {
  return BuildConfig(ParseConfigText(text), base_dir, options);
}

Config load_config(const fs::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseConfig(text, path.has_parent_path() ? path.parent_path() : fs::path("."),
                     options);
}

}  // namespace maskron
