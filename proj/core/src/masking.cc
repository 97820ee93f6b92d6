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

#include "maskron/masking.h"

#include <algorithm>

#include "maskron/error.h"

namespace maskron {
namespace {

constexpr std::string_view kPseudoDomain = "maskron-pseudo-v1";

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }

bool IsHex(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return IsDigit(c) || (c >= 'a' && c <= 'f'); });
}

void AppendU32Be(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
  }
}

// Byte stream HMAC(key, domain 0x00 counter block type 0x00 text) for
// block = 0, 1, ...
class KeyedStream {
 public:
  KeyedStream(std::span<const std::uint8_t> key, std::uint32_t counter,
              std::string_view type, std::string_view text)
      : key_(key), counter_(counter), type_(type), text_(text) {}

  std::uint8_t Draw(std::uint8_t limit) {
    while (true) {
      if (pos_ == buffer_.size()) Refill();
      std::uint8_t b = buffer_[pos_++];
      if (b < limit) return b;
    }
  }

 private:
  void Refill() {
    Bytes msg(kPseudoDomain.begin(), kPseudoDomain.end());
    msg.push_back(0);
    AppendU32Be(msg, counter_);
    AppendU32Be(msg, block_++);
    msg.insert(msg.end(), type_.begin(), type_.end());
    msg.push_back(0);
    msg.insert(msg.end(), text_.begin(), text_.end());
    buffer_ = HmacSha256(key_, msg);
    pos_ = 0;
  }

  std::span<const std::uint8_t> key_;
  std::uint32_t counter_;
  std::string_view type_;
  std::string_view text_;
  std::uint32_t block_ = 0;
  Sha256Digest buffer_{};
  std::size_t pos_ = buffer_.size();
};

std::string DerivePseudonym(std::span<const std::uint8_t> key,
                            const std::string& type, std::string_view text) {
  for (std::uint32_t counter = 0;; ++counter) {
    KeyedStream stream(key, counter, type, text);
    std::string out(text);
    for (char& c : out) {
      if (IsDigit(c)) {
        c = static_cast<char>('0' + stream.Draw(250) % 10);
      } else if (IsUpper(c)) {
        c = static_cast<char>('A' + stream.Draw(234) % 26);
      } else if (IsLower(c)) {
        c = static_cast<char>('a' + stream.Draw(234) % 26);
      }
    }
    if (out != text) return out;
  }
}

// Output builder that keeps the "[[" escaping consistent across adjacent
// literal pieces.
class OutputBuilder {
 public:
  void AppendLiteral(std::string_view piece) {
    std::size_t i = 0;
    if (!piece.empty() && piece[0] == '[' && last_literal_bracket_) {
      // The previous '[' becomes the head of a literal token.
      out_ += "[:L:]]";
      i = 1;
      last_literal_bracket_ = false;
    }
    for (; i < piece.size(); ++i) {
      if (piece[i] == '[' && i + 1 < piece.size() && piece[i + 1] == '[') {
        out_ += kLiteralSentinelToken;
        ++i;
        last_literal_bracket_ = false;
        continue;
      }
      out_.push_back(piece[i]);
      last_literal_bracket_ = piece[i] == '[';
    }
  }

  void AppendToken(std::string_view token) {
    out_ += token;
    last_literal_bracket_ = false;
  }

  std::size_t size() const { return out_.size(); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
  bool last_literal_bracket_ = false;
};

struct ParsedToken {
  enum Kind { kLiteral, kHash, kEncrypt } kind;
  std::string_view type;
  std::string_view id;
  std::string_view payload;
};

// Parses the content between "[[" and "]]".
std::optional<ParsedToken> ParseTokenContent(std::string_view content) {
  if (content == ":L:") return ParsedToken{ParsedToken::kLiteral, {}, {}, {}};
  auto p3 = content.rfind(':');
  if (p3 == std::string_view::npos || p3 == 0) return std::nullopt;
  auto p2 = content.rfind(':', p3 - 1);
  if (p2 == std::string_view::npos || p2 == 0) return std::nullopt;
  auto p1 = content.rfind(':', p2 - 1);
  if (p1 == std::string_view::npos || p1 == 0) return std::nullopt;
  std::string_view type = content.substr(0, p1);
  std::string_view method = content.substr(p1 + 1, p2 - p1 - 1);
  std::string_view id = content.substr(p2 + 1, p3 - p2 - 1);
  std::string_view payload = content.substr(p3 + 1);
  if (!PiiType::IsValidName(type) || !IsValidSecretId(id) || payload.empty()) {
    return std::nullopt;
  }
  if (method == "H") {
    if ((payload.size() != 16 && payload.size() != 64) || !IsHex(payload)) {
      return std::nullopt;
    }
    return ParsedToken{ParsedToken::kHash, type, id, payload};
  }
  if (method == "E") {
    bool ok = std::all_of(payload.begin(), payload.end(), [](char c) {
      return IsDigit(c) || IsUpper(c) || IsLower(c) || c == '-' || c == '_';
    });
    if (!ok) return std::nullopt;
    return ParsedToken{ParsedToken::kEncrypt, type, id, payload};
  }
  return std::nullopt;
}

std::string EncryptAad(std::string_view type, std::string_view key_id) {
  std::string aad(type);
  aad += ':';
  aad += key_id;
  return aad;
}

std::string ReplacementFor(const Detection& d, const PolicyEntry& entry,
                           const Keyring& keyring) {
  switch (entry.strategy) {
    case Strategy::kRedact:
      return mask_redact(d);
    case Strategy::kPseudonymize: {
      const std::string* mode = entry.param("mode");
      if (mode != nullptr && *mode == "random") {
        return mask_pseudonymize(d, nullptr, PseudonymMode::kRandom);
      }
      const std::string* key_id = entry.param("key_id");
      return mask_pseudonymize(d, key_id ? keyring.key(*key_id) : nullptr,
                               PseudonymMode::kDeterministic);
    }
    case Strategy::kHash: {
      const std::string* salt_id = entry.param("salt_id");
      const SecretBytes* salt = salt_id ? keyring.salt(*salt_id) : nullptr;
      if (salt == nullptr) {
        throw Error(ErrorCode::kMissingKey,
                    "salt '" + (salt_id ? *salt_id : std::string()) + "' not in keyring");
      }
      const std::string* full = entry.param("full_digest");
      return mask_hash(d, salt->view(), *salt_id, full != nullptr && *full == "true");
    }
    case Strategy::kEncrypt: {
      const std::string* key_id = entry.param("key_id");
      if (key_id == nullptr) throw Error(ErrorCode::kMissingKey, "no key_id");
      return mask_encrypt(d, keyring.key(*key_id), *key_id);
    }
    case Strategy::kCustomEmail: {
      EmailMaskOptions opts;
      if (const std::string* fill = entry.param("fill_char"); fill && fill->size() == 1) {
        opts.fill_char = (*fill)[0];
      }
      if (const std::string* length = entry.param("length"); length && *length != "match") {
        opts.fixed_length = static_cast<std::size_t>(std::stoul(*length));
      }
      return mask_custom_email(d, opts);
    }
    case Strategy::kPassthrough:
      return d.matched_text;
  }
  return mask_redact(d);
}

bool IsTokenStrategy(Strategy s) {
  return s == Strategy::kRedact || s == Strategy::kHash || s == Strategy::kEncrypt;
}

}  // namespace

std::string mask_redact(const Detection& d) { return "<" + d.pii_type.name() + ">"; }

std::string mask_pseudonymize(const Detection& d, const SecretBytes* key,
                              PseudonymMode mode) {
  const std::string& text = d.matched_text;
  if (std::none_of(text.begin(), text.end(),
                   [](char c) { return IsDigit(c) || IsUpper(c) || IsLower(c); })) {
    throw Error(ErrorCode::kNothingToPseudonymize,
                "no ASCII letters or digits to replace");
  }
  if (mode == PseudonymMode::kRandom) {
    SecretBytes fresh(RandomBytes(kKeySize));
    return DerivePseudonym(fresh.view(), d.pii_type.name(), text);
  }
  if (key == nullptr || key->size() != kKeySize) {
    throw Error(ErrorCode::kMissingKey, "deterministic pseudonymization needs a 32-byte key");
  }
  return DerivePseudonym(key->view(), d.pii_type.name(), text);
}

std::string mask_hash(const Detection& d, std::span<const std::uint8_t> salt,
                      std::string_view salt_id, bool full_digest) {
  if (salt.size() < kMinSaltSize) {
    throw Error(ErrorCode::kWeakSalt, "salt has " + std::to_string(salt.size()) +
                                          " bytes, need at least 16");
  }
  Sha256Digest digest = Sha256(salt, d.matched_text);
  std::string hex = HexEncode(digest);
  if (!full_digest) hex.resize(16);
  return "[[" + d.pii_type.name() + ":H:" + std::string(salt_id) + ":" + hex + "]]";
}

std::string mask_encrypt(const Detection& d, const SecretBytes* key,
                         std::string_view key_id) {
  if (key == nullptr || key->size() != kKeySize) {
    throw Error(ErrorCode::kMissingKey, "key '" + std::string(key_id) + "' unavailable");
  }
  Bytes nonce = RandomBytes(kGcmNonceSize);
  Bytes sealed = AesGcmSeal(key->view(), nonce, d.matched_text,
                            EncryptAad(d.pii_type.name(), key_id));
  return "[[" + d.pii_type.name() + ":E:" + std::string(key_id) + ":" +
         Base64UrlEncode(sealed) + "]]";
}

std::string mask_custom_email(const Detection& d, const EmailMaskOptions& opts) {
  const std::string& text = d.matched_text;
  auto at = text.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == text.size() ||
      text.find('@', at + 1) != std::string::npos) {
    throw Error(ErrorCode::kNotAnEmail, "expected local@domain");
  }
  // Count characters, not bytes, so a multi-byte local part still maps to
  // one fill character per character.
  std::size_t local_chars = 0;
  for (std::size_t i = 0; i < at; ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++local_chars;
  }
  std::size_t n = opts.fixed_length.value_or(local_chars);
  return std::string(n, opts.fill_char) + text.substr(at);
}

std::string EscapeSentinels(std::string_view text) {
  OutputBuilder b;
  b.AppendLiteral(text);
  return b.Take();
}

MaskedDocument apply_policy(std::string_view text,
                            std::span<const Detection> resolved,
                            const PolicyTable& policy, const Keyring& keyring) {
  MaskedDocument doc;
  OutputBuilder out;
  std::size_t pos = 0;
  for (const Detection& d : resolved) {
    const Span& s = d.span;
    if (s.start < pos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "detections must be sorted and non-overlapping");
    }
    ValidateSpan(text, s);
    if (text.substr(s.start, s.length()) != d.matched_text) {
      throw Error(ErrorCode::kMixedSources,
                  "matched_text does not match the text at [" + std::to_string(s.start) +
                      "," + std::to_string(s.end) + ")");
    }
    out.AppendLiteral(text.substr(pos, s.start - pos));

    const PolicyEntry& entry = policy.EntryFor(d.pii_type);
    std::string replacement;
    try {
      replacement = ReplacementFor(d, entry, keyring);
    } catch (const Error& e) {
      throw Error(e.code(), d.pii_type.name() + " at [" + std::to_string(s.start) +
                                "," + std::to_string(s.end) + ") via " +
                                std::string(StrategyName(entry.strategy)) + ": " +
                                e.message());
    }
    std::size_t new_start = out.size();
    if (IsTokenStrategy(entry.strategy)) {
      out.AppendToken(replacement);
    } else {
      out.AppendLiteral(replacement);
    }
    doc.audit.push_back(AuditEntry{s, Span{new_start, out.size()}, d.pii_type,
                                   entry.strategy, d.detector_id});
    ++doc.counts[d.pii_type];
    pos = s.end;
  }
  out.AppendLiteral(text.substr(pos));
  doc.text = out.Take();
  return doc;
}

UnmaskResult unmask(std::string_view text, const Keyring& keyring) {
  UnmaskResult result;
  std::string& out = result.text;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t open = text.find("[[", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    out.append(text.substr(i, open - i));
    std::size_t close = text.find("]]", open + 2);
    if (close == std::string_view::npos) {
      ++result.malformed_tokens;
      out.append(text.substr(open));
      break;
    }
    std::string_view content = text.substr(open + 2, close - open - 2);
    if (!content.empty() && content[0] == '[') {
      // A literal '[' directly before a token.
      out.push_back('[');
      i = open + 1;
      continue;
    }
    std::string_view whole = text.substr(open, close + 2 - open);
    i = close + 2;
    auto token = ParseTokenContent(content);
    if (!token) {
      ++result.malformed_tokens;
      out.append(whole);
      continue;
    }
    switch (token->kind) {
      case ParsedToken::kLiteral:
        out.append("[[");
        break;
      case ParsedToken::kHash:
        out.append(whole);
        break;
      case ParsedToken::kEncrypt: {
        const SecretBytes* key = keyring.key(std::string(token->id));
        if (key == nullptr) {
          ++result.unknown_keys;
          out.append(whole);
          break;
        }
        auto sealed = Base64UrlDecode(token->payload);
        if (!sealed) {
          ++result.malformed_tokens;
          out.append(whole);
          break;
        }
        auto plain = AesGcmOpen(key->view(), *sealed, EncryptAad(token->type, token->id));
        if (!plain) {
          result.auth_failures.push_back(Span{out.size(), out.size() + whole.size()});
          out.append(whole);
          break;
        }
        ++result.decrypted;
        out.append(*plain);
        break;
      }
    }
  }
  return result;
}

std::vector<Span> FindMaskTokens(std::string_view text) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '<') {
      std::size_t close = text.find('>', i + 1);
      if (close != std::string_view::npos && close - i <= 72 &&
          PiiType::IsValidName(text.substr(i + 1, close - i - 1))) {
        spans.push_back(Span{i, close + 1});
        i = close + 1;
        continue;
      }
    } else if (c == '[' && i + 1 < text.size() && text[i + 1] == '[') {
      std::size_t close = text.find("]]", i + 2);
      if (close != std::string_view::npos) {
        std::string_view content = text.substr(i + 2, close - i - 2);
        if (!content.starts_with("[") && ParseTokenContent(content)) {
          spans.push_back(Span{i, close + 2});
          i = close + 2;
          continue;
        }
      }
    }
    ++i;
  }
  return spans;
}

}  // namespace maskron
