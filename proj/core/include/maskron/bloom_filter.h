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

#ifndef MASKRON_BLOOM_FILTER_H_
#define MASKRON_BLOOM_FILTER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace maskron {

// 128-bit MurmurHash3 (x64 variant). The two halves feed the filter's
// double-hashing scheme.
struct Hash128 {
  std::uint64_t h1;
  std::uint64_t h2;
};
Hash128 MurmurHash3_x64_128(std::string_view data, std::uint64_t seed);

// Classic Bloom filter over byte strings.
//
// Bit positions for an item are (h1 + i * h2) mod m for i in [0, k), where
// (h1, h2) = MurmurHash3_x64_128(item, hash_seed).
//
// Serialized form ("BLM1"): the four magic bytes 'B' 'L' 'M' '1', then
// little-endian u64 m, k, n_inserted and hash_seed, then ceil(m / 8) bytes of
// bit array packed LSB-first (bit j lives in byte j / 8 at position j % 8).
// Padding bits past m are zero.
class BloomFilter {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x6d61736b726f6e31ULL;
  static constexpr std::uint64_t kMinBits = 8;
  static constexpr std::uint64_t kMaxHashes = 32;

  // Sizes for `n_expected` items at `target_fpr`:
  //   m = max(8, ceil(-n ln p / (ln 2)^2)),  k = max(1, round(m / n * ln 2))
  // with k capped at 32. Throws Error(kBadParameter).
  static BloomFilter Create(std::uint64_t n_expected, double target_fpr,
                            std::uint64_t hash_seed = kDefaultSeed);

  // Throws Error(kCorruptFormat).
  static BloomFilter Deserialize(std::string_view bytes);

  void Insert(std::string_view item);
  bool MightContain(std::string_view item) const;
  std::string Serialize() const;

  std::uint64_t bit_count() const { return m_; }
  std::uint32_t hash_count() const { return k_; }
  std::uint64_t inserted() const { return n_inserted_; }
  std::uint64_t hash_seed() const { return seed_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // (1 - e^{-k n / m})^k for the current number of inserted items.
  double AnalyticFpr() const;

  friend bool operator==(const BloomFilter&, const BloomFilter&) = default;

 private:
  BloomFilter(std::uint64_t m, std::uint32_t k, std::uint64_t seed);

  std::uint64_t m_;
  std::uint32_t k_;
  std::uint64_t n_inserted_ = 0;
  std::uint64_t seed_;
  std::vector<std::uint8_t> bits_;
};

inline BloomFilter bloom_new(std::uint64_t n_expected, double target_fpr) {
  return BloomFilter::Create(n_expected, target_fpr);
}

}  // namespace maskron

#endif  // MASKRON_BLOOM_FILTER_H_
