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

#ifndef MASKRON_MASKING_H_
#define MASKRON_MASKING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maskron/crypto.h"
#include "maskron/keyring.h"
#include "maskron/types.h"

namespace maskron {

// Output token grammar
// --------------------
//   redaction:   "<" TYPE ">"
//   hash:        "[[" TYPE ":H:" salt_id ":" lower-hex digest "]]"
//   encryption:  "[[" TYPE ":E:" key_id ":" base64url(nonce|ct|tag) "]]"
//   literal:     "[[:L:]]" stands for a "[[" that was present in the input.
//
// Every "[[" that the input carried outside a masked span is written as the
// literal token, so the only "[[" sequences in masked output open tokens.
// unmask() turns literal tokens back into "[[".
inline constexpr std::string_view kLiteralSentinelToken = "[[:L:]]";

std::string mask_redact(const Detection& d);

enum class PseudonymMode { kRandom, kDeterministic };

// Format-preserving replacement: ASCII digits map to digits, ASCII letters to
// letters of the same case, everything else is copied. Deterministic mode
// draws from HMAC-SHA-256(key, "maskron-pseudo-v1" 0x00 u32be(counter)
// u32be(block) TYPE 0x00 text) with rejection sampling; random mode runs the
// same derivation under a fresh random key. The counter is bumped until the
// output differs from the input.
//
// Throws Error(kMissingKey) for deterministic mode without a 32-byte key and
// Error(kNothingToPseudonymize) when the text has no letters or digits.
std::string mask_pseudonymize(const Detection& d, const SecretBytes* key,
                              PseudonymMode mode);

// "[[TYPE:H:salt_id:<hex>]]" over SHA-256(salt || matched_text); 16 hex chars
// unless `full_digest`. Throws Error(kWeakSalt) for salts under 16 bytes.
std::string mask_hash(const Detection& d, std::span<const std::uint8_t> salt,
                      std::string_view salt_id, bool full_digest = false);

// "[[TYPE:E:key_id:<payload>]]" with AES-256-GCM, a fresh 96-bit nonce and
// "TYPE:key_id" as associated data. Throws Error(kMissingKey).
std::string mask_encrypt(const Detection& d, const SecretBytes* key,
                         std::string_view key_id);

struct EmailMaskOptions {
  char fill_char = 'x';
  // Unset means the fill matches the local part's length.
  std::optional<std::size_t> fixed_length;
};

// Replaces the local part and keeps "@domain" verbatim. Throws
// Error(kNotAnEmail) unless the text has exactly one '@' with non-empty
// parts on both sides.
std::string mask_custom_email(const Detection& d, const EmailMaskOptions& opts = {});

// Rewrites `text` according to `policy`. `resolved` must be sorted and
// non-overlapping. Bytes outside the spans are copied unchanged except that
// "[[" is escaped to the literal token. Strategy errors are rethrown with
// the offending span in the message.
MaskedDocument apply_policy(std::string_view text,
                            std::span<const Detection> resolved,
                            const PolicyTable& policy, const Keyring& keyring);

std::string EscapeSentinels(std::string_view text);

struct UnmaskResult {
  std::string text;
  std::size_t decrypted = 0;
  std::size_t malformed_tokens = 0;
  std::size_t unknown_keys = 0;
  // Output-text spans of tokens that failed authentication; left in place.
  std::vector<Span> auth_failures;
};

// Decrypts every well-formed encryption token whose key is in the keyring,
// restores literal tokens and leaves everything else untouched.
UnmaskResult unmask(std::string_view text, const Keyring& keyring);

// Byte ranges of the tokens above (including "<TYPE>" redactions for valid
// type names). Detectors treat these regions as opaque.
std::vector<Span> FindMaskTokens(std::string_view text);

}  // namespace maskron

#endif  // MASKRON_MASKING_H_
