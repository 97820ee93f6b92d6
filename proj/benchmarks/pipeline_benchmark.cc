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


#include <sstream>
#include <string>

#include <benchmark/benchmark.h>

#include "maskron/config.h"
#include "maskron/eval.h"
#include "maskron/keyring.h"
#include "maskron/pipeline.h"

namespace maskron {
namespace {

std::string Lines(std::size_t docs) {
  SyntheticOptions opts;
  opts.seed = 5;
  opts.n_docs = docs;
  std::string text;
  for (const AnnotatedDoc& d : generate_synthetic_corpus(opts)) {
    text += d.text;
    text += '\n';
  }
  return text;
}

// Arg 0 is the worker count.
void BM_MaskTextLines(benchmark::State& state) {
  Config config = DefaultConfig();
  config.parallelism = static_cast<std::size_t>(state.range(0));
  Pipeline pipeline(config);
  const std::string input = Lines(2000);
  for (auto _ : state) {
    std::istringstream in(input);
    std::ostringstream out;
    benchmark::DoNotOptimize(pipeline.RunMask(in, out, nullptr));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * input.size()));
}
BENCHMARK(BM_MaskTextLines)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_MaskEncrypt(benchmark::State& state) {
  Config config = DefaultConfig();
  auto [key_id, key] = keygen();
  auto ring = std::make_shared<Keyring>();
  ring->AddKey(key_id, std::move(key));
  config.keyring = ring;
  for (const char* type : {"EMAIL", "SSN", "PHONE_NUMBER", "CREDIT_CARD", "IP_ADDRESS"}) {
    PolicyEntry& e = config.policy.entries[PiiType::Parse(type)];
    e.strategy = Strategy::kEncrypt;
    e.params["key_id"] = key_id;
  }
  Pipeline pipeline(config);
  const std::string input = Lines(500);
  for (auto _ : state) {
    std::istringstream in(input);
    std::ostringstream out;
    benchmark::DoNotOptimize(pipeline.RunMask(in, out, nullptr));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * input.size()));
}
BENCHMARK(BM_MaskEncrypt)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace maskron

BENCHMARK_MAIN();
