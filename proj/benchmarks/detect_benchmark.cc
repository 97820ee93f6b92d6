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


#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "maskron/bloom_filter.h"
#include "maskron/eval.h"
#include "maskron/regex_detector.h"

namespace maskron {
namespace {

std::string SyntheticText(std::size_t docs) {
  SyntheticOptions opts;
  opts.seed = 11;
  opts.n_docs = docs;
  std::string text;
  for (const AnnotatedDoc& d : generate_synthetic_corpus(opts)) {
    text += d.text;
    text += ' ';
  }
  return text;
}

void BM_ScanRegexDefaults(benchmark::State& state) {
  RuleSet rules = RuleSet::Compile(DefaultRegexRules());
  std::string text = SyntheticText(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_regex(text, rules));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ScanRegexDefaults)->Arg(10)->Arg(100);

void BM_BloomQuery(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  BloomFilter filter = BloomFilter::Create(n, 0.001);
  for (std::uint64_t i = 0; i < n; ++i) filter.Insert("name" + std::to_string(i));
  std::vector<std::string> probes;
  for (int i = 0; i < 1024; ++i) probes.push_back("probe" + std::to_string(i * 7919));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter.MightContain(probes[i++ & 1023]));
  }
}
BENCHMARK(BM_BloomQuery)->Arg(1000)->Arg(100000);

void BM_Murmur3(benchmark::State& state) {
  std::string key(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(MurmurHash3_x64_128(key, 0));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * key.size()));
}
BENCHMARK(BM_Murmur3)->Arg(8)->Arg(64)->Arg(1024);

}  // namespace
}  // namespace maskron

BENCHMARK_MAIN();
