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

#ifndef MASKRON_CONFIG_H_
#define MASKRON_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "maskron/dictionary_detector.h"
#include "maskron/external_detector.h"
#include "maskron/keyring.h"
#include "maskron/records.h"
#include "maskron/regex_detector.h"
#include "maskron/resolve.h"
#include "maskron/types.h"

namespace maskron {

inline constexpr const char* kKeyringEnvVar = "MASKRON_KEYRING";

// A fully validated run configuration with every referenced file loaded.
struct Config {
  InputConfig input;

  bool regex_enabled = true;
  RuleSet regex_rules;
  std::vector<std::shared_ptr<const DictionaryDetector>> dictionaries;
  std::vector<ExternalEndpoint> external;

  PolicyTable policy;
  Precedence precedence = DefaultPrecedence();

  std::optional<std::filesystem::path> keyring_path;
  std::shared_ptr<const Keyring> keyring = std::make_shared<Keyring>();

  std::size_t parallelism = 1;
  std::size_t queue_depth = 256;
  std::optional<std::filesystem::path> metrics_path;
  std::optional<std::filesystem::path> dead_letter_path;
};

// Text lines, built-in regex rules, everything redacted.
Config DefaultConfig();

struct LoadOptions {
  // Takes priority over the config file and MASKRON_KEYRING.
  std::optional<std::filesystem::path> keyring_override;
  // When false, MASKRON_KEYRING is ignored.
  bool use_environment = true;
};

// Reads and validates a config file. Relative paths inside it resolve
// against the file's directory. Throws Error(kIoError), Error(kParseError),
// Error(kValidationError) or the policy validation codes.
Config load_config(const std::filesystem::path& path, const LoadOptions& options = {});

// Same, from text already in memory.
Config ParseConfig(std::string_view text, const std::filesystem::path& base_dir,
                   const LoadOptions& options = {});
Config BuildConfig(const nlohmann::json& tree, const std::filesystem::path& base_dir,
                   const LoadOptions& options = {});

}  // namespace maskron

#endif  // MASKRON_CONFIG_H_
