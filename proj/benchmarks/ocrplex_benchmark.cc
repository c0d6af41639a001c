// Copyright 2026 The Ocrplex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "ocrplex/channel.h"
#include "ocrplex/complexity.h"
#include "ocrplex/corpus.h"
#include "ocrplex/metrics.h"
#include "ocrplex/noise.h"

namespace ocrplex {
namespace {

Alphabet Alphanumeric() {
  std::vector<char32_t> chars;
  for (char32_t c = U'a'; c <= U'z'; ++c) chars.push_back(c);
  for (char32_t c = U'0'; c <= U'9'; ++c) chars.push_back(c);
  return Alphabet(chars);
}

std::string RandomString(std::size_t length, std::mt19937_64& g) {
  static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s += kChars[g() % 36];
  return s;
}

// Zipf-like counts over `size` random alphanumeric types of length 2..10.
Vocabulary SyntheticVocabulary(std::size_t size) {
  std::mt19937_64 g(17);
  Vocabulary vocab;
  for (std::uint64_t rank = 1; vocab.size() < size; ++rank) {
    const std::string word = RandomString(2 + g() % 9, g);
    if (!vocab.Contains(word)) vocab.Add(word, 1 + 100000 / rank);
  }
  return vocab;
}

void BM_EstimateTheta(benchmark::State& state) {
  const Vocabulary vocab = SyntheticVocabulary(state.range(0));
  const ConfusionModel model = UniformNoise(Alphanumeric(), 0.07);
  const ComplexityEstimator estimator(vocab, model);
  EstimateOptions options;
  options.n_samples = 100000;
  options.shards = 1;
  options.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimator.Estimate(Subset::kAll, options));
  }
  state.SetItemsProcessed(state.iterations() * options.n_samples);
}
BENCHMARK(BM_EstimateTheta)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DenoiseWord(benchmark::State& state) {
  const Vocabulary vocab = SyntheticVocabulary(10000);
  const CandidateIndex index = BuildCandidateIndex(vocab);
  const ConfusionModel model = UniformNoise(Alphanumeric(), 0.07);
  const UnigramDecoder decoder(index, model);
  std::mt19937_64 g(3);
  std::vector<std::string> queries;
  for (int i = 0; i < 1024; ++i) queries.push_back(RandomString(2 + g() % 9, g));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decoder.Decode(queries[i++ % queries.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DenoiseWord);

void BM_TokenEditDistance(benchmark::State& state) {
  std::mt19937_64 g(5);
  const std::string pool[] = {"the", "cat", "sat", "on", "mat", "2023"};
  std::vector<std::string> a(state.range(0)), b(state.range(0));
  for (auto& t : a) t = pool[g() % 6];
  for (auto& t : b) t = pool[g() % 6];
  for (auto _ : state) benchmark::DoNotOptimize(TokenEditDistance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TokenEditDistance)->Range(16, 4096)->Complexity(benchmark::oNSquared);

}  // namespace
}  // namespace ocrplex

BENCHMARK_MAIN();
