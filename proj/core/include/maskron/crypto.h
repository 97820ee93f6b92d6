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

#ifndef MASKRON_CRYPTO_H_
#define MASKRON_CRYPTO_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maskron {

using Bytes = std::vector<std::uint8_t>;

// Owned key or salt material. Wiped on destruction; has no stream operator
// so it cannot end up in logs by accident.
class SecretBytes {
 public:
  SecretBytes() = default;
  explicit SecretBytes(Bytes bytes) : bytes_(std::move(bytes)) {}
  SecretBytes(const SecretBytes&) = default;
  SecretBytes(SecretBytes&&) noexcept = default;
  SecretBytes& operator=(const SecretBytes&) = default;
  SecretBytes& operator=(SecretBytes&&) noexcept = default;
  ~SecretBytes();

  std::span<const std::uint8_t> view() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

  friend bool operator==(const SecretBytes&, const SecretBytes&) = default;

 private:
  Bytes bytes_;
};

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest Sha256(std::span<const std::uint8_t> prefix, std::string_view data);
Sha256Digest HmacSha256(std::span<const std::uint8_t> key,
                        std::span<const std::uint8_t> message);

// Fills from the OS CSPRNG. Throws Error(kEntropyUnavailable).
Bytes RandomBytes(std::size_t n);

// Random (version 4) UUID in canonical lower-case form.
std::string RandomUuid();

inline constexpr std::size_t kGcmNonceSize = 12;
inline constexpr std::size_t kGcmTagSize = 16;

// AES-256-GCM. The result is nonce || ciphertext || tag. Throws
// Error(kMissingKey) unless the key is 32 bytes.
Bytes AesGcmSeal(std::span<const std::uint8_t> key,
                 std::span<const std::uint8_t> nonce, std::string_view plaintext,
                 std::string_view aad);
// Inverse of AesGcmSeal; nullopt when authentication fails or the payload is
// too short.
std::optional<std::string> AesGcmOpen(std::span<const std::uint8_t> key,
                                      std::span<const std::uint8_t> sealed,
                                      std::string_view aad);

std::string HexEncode(std::span<const std::uint8_t> bytes);
std::optional<Bytes> HexDecode(std::string_view hex);

// RFC 4648 section 5 alphabet, unpadded.
std::string Base64UrlEncode(std::span<const std::uint8_t> bytes);
// Rejects padding, foreign characters and non-canonical trailing bits.
std::optional<Bytes> Base64UrlDecode(std::string_view text);

}  // namespace maskron

#endif  // MASKRON_CRYPTO_H_
