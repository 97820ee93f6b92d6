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

#include "maskron/keyring.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "maskron/error.h"

namespace maskron {
namespace {

constexpr std::string_view kHeader = "maskron-keyring v1";

}  // namespace

bool IsValidSecretId(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void Keyring::AddKey(const std::string& id, SecretBytes key) {
  if (!IsValidSecretId(id)) throw Error(ErrorCode::kInvalidArgument, "bad key id '" + id + "'");
  if (key.size() != kKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "key " + id + " must be 32 bytes");
  }
  if (keys_.contains(id) || salts_.contains(id)) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate id " + id);
  }
  keys_.emplace(id, std::move(key));
}

void Keyring::AddSalt(const std::string& id, SecretBytes salt) {
  if (!IsValidSecretId(id)) throw Error(ErrorCode::kInvalidArgument, "bad salt id '" + id + "'");
  if (salt.size() < kMinSaltSize) {
    throw Error(ErrorCode::kWeakSalt, "salt " + id + " shorter than 16 bytes");
  }
  if (keys_.contains(id) || salts_.contains(id)) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate id " + id);
  }
  salts_.emplace(id, std::move(salt));
}

const SecretBytes* Keyring::key(const std::string& id) const {
  auto it = keys_.find(id);
  return it == keys_.end() ? nullptr : &it->second;
}

const SecretBytes* Keyring::salt(const std::string& id) const {
  auto it = salts_.find(id);
  return it == salts_.end() ? nullptr : &it->second;
}

KnownSecrets Keyring::ids() const {
  KnownSecrets out;
  for (const auto& [id, _] : keys_) out.key_ids.insert(id);
  for (const auto& [id, _] : salts_) out.salt_ids.insert(id);
  return out;
}

Keyring Keyring::Parse(std::string_view text) {
  Keyring ring;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParseError,
                   "keyring line " + std::to_string(line_no) + ": " + why);
    };
    if (!saw_header) {
      if (line != kHeader) throw fail("expected header '" + std::string(kHeader) + "'");
      saw_header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string kind, id, hex, extra;
    if (!(fields >> kind >> id >> hex) || (fields >> extra)) {
      throw fail("expected '<key|salt> <id> <hex>'");
    }
    auto material = HexDecode(hex);
    if (!material) throw fail("material is not hex");
    try {
      if (kind == "key") {
        ring.AddKey(id, SecretBytes(std::move(*material)));
      } else if (kind == "salt") {
        ring.AddSalt(id, SecretBytes(std::move(*material)));
      } else {
        throw fail("unknown entry kind '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParseError) throw;
      throw fail(e.message());
    }
  }
  if (!saw_header) throw Error(ErrorCode::kParseError, "keyring is empty");
  return ring;
}

Keyring Keyring::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open keyring " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return Parse(text);
}

std::string Keyring::Serialize() const {
  std::string out(kHeader);
  out += "\n";
  for (const auto& [id, k] : keys_) out += "key " + id + " " + HexEncode(k.view()) + "\n";
  for (const auto& [id, s] : salts_) out += "salt " + id + " " + HexEncode(s.view()) + "\n";
  return out;
}

void Keyring::Save(const std::filesystem::path& path) const {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  std::filesystem::remove(tmp);
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0600);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + tmp.string() + ": " + std::strerror(errno));
  }
  std::string data = Serialize();
  std::size_t written = 0;
  while (written < data.size()) {
    ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      std::filesystem::remove(tmp);
      throw Error(ErrorCode::kIoError, "write failed on " + tmp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot flush " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot replace " + path.string());
}

std::pair<std::string, SecretBytes> keygen() {
  return {RandomUuid(), SecretBytes(RandomBytes(kKeySize))};
}

std::pair<std::string, SecretBytes> salt_gen() {
  return {RandomUuid(), SecretBytes(RandomBytes(kSaltSize))};
}

bool KeyringPermissionsTooOpen(const std::filesystem::path& path) {
  using std::filesystem::perms;
  auto p = std::filesystem::status(path).permissions();
  return (p & (perms::group_read | perms::others_read | perms::group_write |
               perms::others_write)) != perms::none;
}

}  // namespace maskron
