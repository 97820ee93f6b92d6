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

#ifndef MASKRON_KEYRING_H_
#define MASKRON_KEYRING_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "maskron/crypto.h"
#include "maskron/types.h"

namespace maskron {

inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kSaltSize = 16;
inline constexpr std::size_t kMinSaltSize = 16;

// Symmetric keys and hashing salts, addressed by id.
//
// File format (UTF-8 text, '#' starts a comment line):
//
//   maskron-keyring v1
//   key  <id> <64 hex chars>
//   salt <id> <at least 32 hex chars>
//
// Ids match [A-Za-z0-9_-]+ and are unique across keys and salts. Files are
// written with mode 0600. Rotation means adding a new id; old ids stay
// available for unmasking.
class Keyring {
 public:
  // Throws Error(kIoError) or Error(kParseError).
  static Keyring Load(const std::filesystem::path& path);
  static Keyring Parse(std::string_view text);

  // Atomically replaces `path` with a 0600 file.
  void Save(const std::filesystem::path& path) const;
  std::string Serialize() const;

  // Throws Error(kInvalidArgument) on bad ids, duplicates or wrong sizes.
  void AddKey(const std::string& id, SecretBytes key);
  void AddSalt(const std::string& id, SecretBytes salt);

  const SecretBytes* key(const std::string& id) const;
  const SecretBytes* salt(const std::string& id) const;

  KnownSecrets ids() const;
  bool empty() const { return keys_.empty() && salts_.empty(); }

 private:
  std::map<std::string, SecretBytes> keys_;
  std::map<std::string, SecretBytes> salts_;
};

// Fresh 256-bit key / 128-bit salt under a random UUID. Throws
// Error(kEntropyUnavailable).
std::pair<std::string, SecretBytes> keygen();
std::pair<std::string, SecretBytes> salt_gen();

// True when group or other may read the file.
bool KeyringPermissionsTooOpen(const std::filesystem::path& path);

bool IsValidSecretId(std::string_view id);

}  // namespace maskron

#endif  // MASKRON_KEYRING_H_
