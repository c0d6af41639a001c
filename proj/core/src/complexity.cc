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

#include "ocrplex/complexity.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <cmath>
#include <thread>

#include "ocrplex/error.h"

namespace ocrplex {
namespace {

struct SampledWord {
  std::int32_t id;
  std::span<const std::int32_t> chars;
};

// Number of erroneous decodes among samples [begin, end).
std::uint64_t CountErrors(const UnigramDecoder& decoder,
                          const NoiseSampler& sampler,
                          const WordSampler& words,
                          std::span<const SampledWord> sampled,
                          std::uint64_t seed, std::uint64_t begin,
                          std::uint64_t end) {
  std::vector<std::int32_t> observed;
  std::uint64_t errors = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    CounterRng rng(seed, i);
    const SampledWord& word = sampled[words.SampleIndex(rng)];
    observed.resize(word.chars.size());
    sampler.CorruptEncoded(word.chars, observed, rng);
    const std::int32_t decoded = decoder.DecodeEncoded(observed);
    if (decoded == word.id) continue;
    if (decoded == UnigramDecoder::kKeepObservation &&
        std::equal(observed.begin(), observed.end(), word.chars.begin(),
                   word.chars.end())) {
      continue;
    }
    ++errors;
  }
  return errors;
}

std::uint64_t CheckedPow(std::uint64_t base, std::size_t exponent,
                         std::uint64_t cap) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

}  // namespace

ComplexityEstimator::ComplexityEstimator(const Vocabulary& vocab,
                                         const ConfusionModel& model)
    : vocab_(vocab),
      model_(model),
      decoder_(BuildCandidateIndex(vocab), model),
      sampler_(model) {}

ComplexityEstimate ComplexityEstimator::Estimate(
    Subset subset, const EstimateOptions& options) const {
  if (options.n_samples == 0) throw Error("n_samples must be positive");
  if (options.shards == 0) throw Error("shards must be positive");
  const WordSampler words(vocab_, subset);
  std::vector<SampledWord> sampled;
  sampled.reserve(words.words().size());
  for (const std::string& word : words.words()) {
    const std::int32_t id = decoder_.IdOf(word);
    sampled.push_back({id, decoder_.EncodedWord(id)});
  }

  const std::uint64_t n = options.n_samples;
  const std::size_t shards = options.shards;
  std::vector<std::uint64_t> shard_errors(shards, 0);
  auto run_shard = [&](std::size_t s) {
    const std::uint64_t begin = n / shards * s + std::min<std::uint64_t>(s, n % shards);
    const std::uint64_t end =
        begin + n / shards + (s < n % shards ? 1 : 0);
    shard_errors[s] = CountErrors(decoder_, sampler_, words, sampled,
                                  options.seed, begin, end);
  };

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, shards);
  if (threads <= 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < shards; s = next++) run_shard(s);
      });
    }
  }

  std::uint64_t errors = 0;
  for (std::uint64_t e : shard_errors) errors += e;
  ComplexityEstimate estimate;
  estimate.n_samples = n;
  estimate.errors = errors;
  estimate.theta = static_cast<double>(errors) / static_cast<double>(n);
  estimate.std_error = std::sqrt(estimate.theta * (1.0 - estimate.theta) /
                                 static_cast<double>(n));
  estimate.subset = subset;
  estimate.seed = options.seed;
  return estimate;
}

double ComplexityEstimator::Exhaustive(Subset subset,
                                       std::uint64_t max_terms) const {
  const WordSampler words(vocab_, subset);
  const std::size_t a = model_.size();
  const double subset_total = static_cast<double>(words.subset_total());

  struct Entry {
    std::int32_t id;
    double prior;
    std::span<const std::int32_t> chars;
  };
  std::map<std::size_t, std::vector<Entry>> by_length;
  std::uint64_t terms = 0;
  double theta = 0.0;
  for (const std::string& word : words.words()) {
    const std::int32_t id = decoder_.IdOf(word);
    const std::span<const std::int32_t> chars = decoder_.EncodedWord(id);
    const double prior =
        static_cast<double>(vocab_.Count(word)) / subset_total;
    if (std::find(chars.begin(), chars.end(), Alphabet::kAbsent) !=
        chars.end()) {
      // Unknown characters survive corruption and force the decoder to keep
      // the observation, which is right only if nothing else changed.
      double unchanged = 1.0;
      for (std::int32_t c : chars) {
        if (c != Alphabet::kAbsent) unchanged *= model_.sub(c, c);
      }
      theta += prior * (1.0 - unchanged);
      continue;
    }
    terms += CheckedPow(a, chars.size(), max_terms);
    if (terms > max_terms) {
      throw Error("exhaustive enumeration needs more than " +
                  std::to_string(max_terms) + " terms");
    }
    by_length[chars.size()].push_back({id, prior, chars});
  }

  std::vector<std::int32_t> observed;
  for (const auto& [length, entries] : by_length) {
    observed.assign(length, 0);
    while (true) {
      const std::int32_t decoded = decoder_.DecodeEncoded(observed);
      for (const Entry& entry : entries) {
        if (entry.id == decoded) continue;
        double likelihood = entry.prior;
        for (std::size_t p = 0; p < length; ++p) {
          likelihood *= model_.sub(entry.chars[p], observed[p]);
        }
        theta += likelihood;
      }
      // Odometer increment over A^length.
      std::size_t p = 0;
      while (p < length && ++observed[p] == static_cast<std::int32_t>(a)) {
        observed[p++] = 0;
      }
      if (p == length) break;
    }
  }
  return theta;
}

ComplexityEstimate EstimateTheta(const Vocabulary& vocab,
                                 const ConfusionModel& model, Subset subset,
                                 const EstimateOptions& options) {
  return ComplexityEstimator(vocab, model).Estimate(subset, options);
}

double ExhaustiveTheta(const Vocabulary& vocab, const ConfusionModel& model,
                       Subset subset, std::uint64_t max_terms) {
  return ComplexityEstimator(vocab, model).Exhaustive(subset, max_terms);
}

std::vector<double> DefaultGammaGrid() {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::uint64_t SweepRowSeed(std::uint64_t master_seed, double gamma,
                           Subset subset) {
  return DeriveSeed(master_seed, std::bit_cast<std::uint64_t>(gamma),
                    static_cast<std::uint64_t>(subset));
}

SweepReport GammaSweep(const Vocabulary& vocab,
                       const ConfusionModel& base_model,
                       std::span<const double> gammas,
                       std::span<const Subset> subsets,
                       const EstimateOptions& options) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    NoiseLevel check(gammas[i]);
    if (i > 0 && !(gammas[i] > gammas[i - 1])) {
      throw Error("gamma values must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (subsets[i] == subsets[j]) throw Error("duplicate subset in sweep");
    }
  }

  SweepReport report;
  report.seed = options.seed;
  for (double gamma : gammas) {
    const ComplexityEstimator estimator(
        vocab, Interpolate(base_model, NoiseLevel(gamma)));
    for (Subset subset : subsets) {
      EstimateOptions row_options = options;
      row_options.seed = SweepRowSeed(options.seed, gamma, subset);
      ComplexityEstimate estimate = estimator.Estimate(subset, row_options);
      estimate.gamma = gamma;
      report.rows.push_back(estimate);
    }
  }
  return report;
}

}  // namespace ocrplex
