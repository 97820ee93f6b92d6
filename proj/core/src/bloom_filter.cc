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

#include "maskron/bloom_filter.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "maskron/error.h"

namespace maskron {
namespace {

constexpr char kMagic[4] = {'B', 'L', 'M', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 * 8;

inline std::uint64_t Rotl64(std::uint64_t x, int r) {
  return (x << r) | (x >> (64 - r));
}

inline std::uint64_t Fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

inline std::uint64_t LoadLe64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void AppendLe64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

Hash128 MurmurHash3_x64_128(std::string_view data, std::uint64_t seed) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
  const std::size_t len = data.size();
  const std::size_t nblocks = len / 16;
  std::uint64_t h1 = seed;
  std::uint64_t h2 = seed;
  constexpr std::uint64_t c1 = 0x87c37b91114253d5ULL;
  constexpr std::uint64_t c2 = 0x4cf5ad432745937fULL;

  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint64_t k1 = LoadLe64(bytes + i * 16);
    std::uint64_t k2 = LoadLe64(bytes + i * 16 + 8);
    k1 *= c1;
    k1 = Rotl64(k1, 31);
    k1 *= c2;
    h1 ^= k1;
    h1 = Rotl64(h1, 27);
    h1 += h2;
    h1 = h1 * 5 + 0x52dce729;
    k2 *= c2;
    k2 = Rotl64(k2, 33);
    k2 *= c1;
    h2 ^= k2;
    h2 = Rotl64(h2, 31);
    h2 += h1;
    h2 = h2 * 5 + 0x38495ab5;
  }

  const unsigned char* tail = bytes + nblocks * 16;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  switch (len & 15) {
    case 15: k2 ^= std::uint64_t{tail[14]} << 48; [[fallthrough]];
    case 14: k2 ^= std::uint64_t{tail[13]} << 40; [[fallthrough]];
    case 13: k2 ^= std::uint64_t{tail[12]} << 32; [[fallthrough]];
    case 12: k2 ^= std::uint64_t{tail[11]} << 24; [[fallthrough]];
    case 11: k2 ^= std::uint64_t{tail[10]} << 16; [[fallthrough]];
    case 10: k2 ^= std::uint64_t{tail[9]} << 8; [[fallthrough]];
    case 9:
      k2 ^= std::uint64_t{tail[8]};
      k2 *= c2;
      k2 = Rotl64(k2, 33);
      k2 *= c1;
      h2 ^= k2;
      [[fallthrough]];
    case 8: k1 ^= std::uint64_t{tail[7]} << 56; [[fallthrough]];
    case 7: k1 ^= std::uint64_t{tail[6]} << 48; [[fallthrough]];
    case 6: k1 ^= std::uint64_t{tail[5]} << 40; [[fallthrough]];
    case 5: k1 ^= std::uint64_t{tail[4]} << 32; [[fallthrough]];
    case 4: k1 ^= std::uint64_t{tail[3]} << 24; [[fallthrough]];
    case 3: k1 ^= std::uint64_t{tail[2]} << 16; [[fallthrough]];
    case 2: k1 ^= std::uint64_t{tail[1]} << 8; [[fallthrough]];
    case 1:
      k1 ^= std::uint64_t{tail[0]};
      k1 *= c1;
      k1 = Rotl64(k1, 31);
      k1 *= c2;
      h1 ^= k1;
  }

  h1 ^= len;
  h2 ^= len;
  h1 += h2;
  h2 += h1;
  h1 = Fmix64(h1);
  h2 = Fmix64(h2);
  h1 += h2;
  h2 += h1;
  return {h1, h2};
}

BloomFilter::BloomFilter(std::uint64_t m, std::uint32_t k, std::uint64_t seed)
    : m_(m), k_(k), seed_(seed), bits_((m + 7) / 8, 0) {}

BloomFilter BloomFilter::Create(std::uint64_t n_expected, double target_fpr,
                                std::uint64_t hash_seed) {
  if (n_expected < 1) {
    throw Error(ErrorCode::kBadParameter, "n_expected must be >= 1");
  }
  if (!(target_fpr > 0.0 && target_fpr < 1.0)) {
    throw Error(ErrorCode::kBadParameter,
                "target_fpr must lie in (0, 1), got " + std::to_string(target_fpr));
  }
  const double ln2 = std::log(2.0);
  const double n = static_cast<double>(n_expected);
  double raw_m = std::ceil(-n * std::log(target_fpr) / (ln2 * ln2));
  if (raw_m > 8.0 * 1024 * 1024 * 1024 * 8) {
    throw Error(ErrorCode::kBadParameter, "filter would exceed 8 GiB");
  }
  std::uint64_t m = std::max<std::uint64_t>(kMinBits, static_cast<std::uint64_t>(raw_m));
  double raw_k = std::round(static_cast<double>(m) / n * ln2);
  std::uint32_t k = static_cast<std::uint32_t>(
      std::clamp(raw_k, 1.0, static_cast<double>(kMaxHashes)));
  return BloomFilter(m, k, hash_seed);
}

void BloomFilter::Insert(std::string_view item) {
  Hash128 h = MurmurHash3_x64_128(item, seed_);
  for (std::uint32_t i = 0; i < k_; ++i) {
    std::uint64_t bit = (h.h1 + i * h.h2) % m_;
    bits_[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
  }
  ++n_inserted_;
}

bool BloomFilter::MightContain(std::string_view item) const {
  Hash128 h = MurmurHash3_x64_128(item, seed_);
  for (std::uint32_t i = 0; i < k_; ++i) {
    std::uint64_t bit = (h.h1 + i * h.h2) % m_;
    if ((bits_[bit >> 3] & (1u << (bit & 7))) == 0) return false;
  }
  return true;
}

double BloomFilter::AnalyticFpr() const {
  double exponent = -static_cast<double>(k_) * static_cast<double>(n_inserted_) /
                    static_cast<double>(m_);
  return std::pow(1.0 - std::exp(exponent), static_cast<double>(k_));
}

std::string BloomFilter::Serialize() const {
  std::string out;
  out.reserve(kHeaderSize + bits_.size());
  out.append(kMagic, sizeof(kMagic));
  AppendLe64(out, m_);
  AppendLe64(out, k_);
  AppendLe64(out, n_inserted_);
  AppendLe64(out, seed_);
  out.append(reinterpret_cast<const char*>(bits_.data()), bits_.size());
  return out;
}

BloomFilter BloomFilter::Deserialize(std::string_view bytes) {
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorCode::kCorruptFormat, "truncated header");
  }
  if (std::memcmp(bytes.data(), kMagic, 3) != 0) {
    throw Error(ErrorCode::kCorruptFormat, "bad magic");
  }
  if (bytes[3] != kMagic[3]) {
    throw Error(ErrorCode::kCorruptFormat,
                "unsupported version byte 0x" +
                    std::to_string(static_cast<unsigned char>(bytes[3])));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + 4;
  std::uint64_t m = LoadLe64(p);
  std::uint64_t k = LoadLe64(p + 8);
  std::uint64_t n = LoadLe64(p + 16);
  std::uint64_t seed = LoadLe64(p + 24);
  if (m < kMinBits) throw Error(ErrorCode::kCorruptFormat, "m below 8");
  if (k < 1 || k > kMaxHashes) throw Error(ErrorCode::kCorruptFormat, "k out of range");
  std::uint64_t payload = bytes.size() - kHeaderSize;
  if (payload != (m + 7) / 8) {
    throw Error(ErrorCode::kCorruptFormat,
                "bit array is " + std::to_string(payload) + " bytes, expected " +
                    std::to_string((m + 7) / 8));
  }
  BloomFilter f(m, static_cast<std::uint32_t>(k), seed);
  f.n_inserted_ = n;
  std::memcpy(f.bits_.data(), bytes.data() + kHeaderSize, payload);
  if (m % 8 != 0) {
    std::uint8_t pad_mask = static_cast<std::uint8_t>(0xFF << (m % 8));
    if (f.bits_.back() & pad_mask) {
      throw Error(ErrorCode::kCorruptFormat, "nonzero padding bits");
    }
  }
  return f;
}

}  // namespace maskron
