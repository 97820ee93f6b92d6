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

#include "maskron/crypto.h"

#include <set>
#include <sys/stat.h>

#include <gtest/gtest.h>

#include "maskron/error.h"
#include "maskron/keyring.h"
#include "support/test_util.h"

namespace maskron {
namespace {

Bytes Seq(std::size_t n) {
  Bytes b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i);
  return b;
}

TEST(CryptoTest, Sha256WithPrefix) {
  Bytes salt(16, 0);
  EXPECT_EQ(HexEncode(Sha256(salt, "abc")),
            "277e7ff6d232b9763f4a66e8d05d210da32dac9c6dbce1026ad4cc98acb5fefe");
  EXPECT_EQ(HexEncode(Sha256({}, "abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CryptoTest, HmacRfc4231Case2) {
  std::string key = "Jefe";
  std::string msg = "what do ya want for nothing?";
  auto mac = HmacSha256({reinterpret_cast<const std::uint8_t*>(key.data()), key.size()},
                        {reinterpret_cast<const std::uint8_t*>(msg.data()), msg.size()});
  EXPECT_EQ(HexEncode(mac),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(CryptoTest, AesGcmKnownAnswer) {
  Bytes key = Seq(32);
  Bytes nonce = Seq(12);
  Bytes sealed = AesGcmSeal(key, nonce, "johndoe@example.com", "EMAIL:k1");
  EXPECT_EQ(HexEncode(sealed),
            "000102030405060708090a0b"
            "2d6dbe75a18aa75be839f6e6c1851d43e0b9eaee9975af366eb5ca329a49a672e41132");
  EXPECT_EQ(AesGcmOpen(key, sealed, "EMAIL:k1"), "johndoe@example.com");
  EXPECT_EQ(AesGcmOpen(key, sealed, "EMAIL:k2"), std::nullopt);
  for (std::size_t bit = 0; bit < sealed.size() * 8; bit += 7) {
    Bytes flipped = sealed;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_EQ(AesGcmOpen(key, flipped, "EMAIL:k1"), std::nullopt) << bit;
  }
  EXPECT_EQ(AesGcmOpen(key, Bytes(10), "EMAIL:k1"), std::nullopt);
  EXPECT_THROW(AesGcmSeal(Seq(16), nonce, "x", ""), Error);
}

TEST(CryptoTest, HexRoundTrip) {
  Bytes b = Seq(256);
  EXPECT_EQ(HexDecode(HexEncode(b)), b);
  EXPECT_EQ(HexDecode("0"), std::nullopt);
  EXPECT_EQ(HexDecode("zz"), std::nullopt);
  EXPECT_EQ(HexDecode("ABcd"), (Bytes{0xab, 0xcd}));
}

TEST(CryptoTest, Base64Url) {
  // RFC 4648 test vectors, unpadded, with the URL alphabet.
  auto enc = [](std::string s) {
    return Base64UrlEncode({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg");
  EXPECT_EQ(enc("fo"), "Zm8");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
  EXPECT_EQ(Base64UrlEncode(Bytes{0xfb, 0xff}), "-_8");
  for (std::size_t n = 0; n < 40; ++n) {
    Bytes b = Seq(n);
    EXPECT_EQ(Base64UrlDecode(Base64UrlEncode(b)), b);
  }
  EXPECT_EQ(Base64UrlDecode("Zg=="), std::nullopt);
  EXPECT_EQ(Base64UrlDecode("Zh"), std::nullopt);  // non-zero trailing bits
  EXPECT_EQ(Base64UrlDecode("Z"), std::nullopt);
  EXPECT_EQ(Base64UrlDecode("+/8"), std::nullopt);
}

TEST(CryptoTest, RandomnessLooksRandom) {
  EXPECT_EQ(RandomBytes(32).size(), 32u);
  EXPECT_NE(RandomBytes(32), RandomBytes(32));
  std::set<std::string> ids;
  for (int i = 0; i < 100; ++i) {
    std::string id = RandomUuid();
    ASSERT_EQ(id.size(), 36u);
    EXPECT_EQ(id[14], '4');
    EXPECT_NE(std::string("89ab").find(id[19]), std::string::npos);
    ids.insert(id);
  }
  EXPECT_EQ(ids.size(), 100u);
}

TEST(KeyringTest, SaveLoadRoundTrip) {
  testing::TempDir dir;
  Keyring ring = testing::FixedKeyring();
  ring.Save(dir / "ring");
  struct stat st;
  ASSERT_EQ(::stat((dir / "ring").c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  EXPECT_FALSE(KeyringPermissionsTooOpen(dir / "ring"));
  Keyring loaded = Keyring::Load(dir / "ring");
  ASSERT_NE(loaded.key("k1"), nullptr);
  EXPECT_EQ(*loaded.key("k1"), testing::SequentialKey());
  ASSERT_NE(loaded.salt("s1"), nullptr);
  EXPECT_EQ(loaded.salt("s1")->size(), 16u);
  EXPECT_EQ(loaded.key("s1"), nullptr);
  EXPECT_EQ(loaded.ids().key_ids, (std::set<std::string>{"k1"}));
  EXPECT_EQ(loaded.ids().salt_ids, (std::set<std::string>{"s1", "s2"}));
  EXPECT_EQ(loaded.Serialize(), ring.Serialize());
}

TEST(KeyringTest, ParseErrors) {
  auto code = [](std::string text) {
    try {
      Keyring::Parse(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  std::string key(64, 'a');
  EXPECT_EQ(code("key k1 " + key + "\n"), ErrorCode::kParseError);  // no header
  EXPECT_EQ(code("maskron-keyring v1\nkey k1 abc\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("maskron-keyring v1\nsalt s1 abcd\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("maskron-keyring v1\nkey k1 " + key + "\nkey k1 " + key + "\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(code("maskron-keyring v1\nkey bad/id " + key + "\n"), ErrorCode::kParseError);
  EXPECT_EQ(code("maskron-keyring v1\nfrob x y\n"), ErrorCode::kParseError);
  Keyring ok = Keyring::Parse("maskron-keyring v1\n# comment\n\nkey k1 " + key + "\n");
  EXPECT_NE(ok.key("k1"), nullptr);
}

TEST(KeyringTest, GeneratedMaterial) {
  auto [key_id, key] = keygen();
  auto [salt_id, salt] = salt_gen();
  EXPECT_EQ(key.size(), kKeySize);
  EXPECT_EQ(salt.size(), kSaltSize);
  EXPECT_TRUE(IsValidSecretId(key_id));
  EXPECT_NE(key_id, salt_id);
  Keyring ring;
  ring.AddKey(key_id, key);
  EXPECT_THROW(ring.AddSalt(key_id, salt), Error);
  EXPECT_THROW(ring.AddKey("short", SecretBytes(Bytes(16))), Error);
  EXPECT_THROW(ring.AddSalt("weak", SecretBytes(Bytes(8))), Error);
}

TEST(KeyringTest, DetectsOpenPermissions) {
  testing::TempDir dir;
  testing::FixedKeyring().Save(dir / "ring");
  ::chmod((dir / "ring").c_str(), 0644);
  EXPECT_TRUE(KeyringPermissionsTooOpen(dir / "ring"));
}

}  // namespace
}  // namespace maskron
