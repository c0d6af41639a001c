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

#ifndef OCRPLEX_COMPLEXITY_H_
#define OCRPLEX_COMPLEXITY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ocrplex/channel.h"
#include "ocrplex/corpus.h"
#include "ocrplex/noise.h"

namespace ocrplex {

// Denoising complexity: the probability that the optimal unigram decoder,
// given the true prior and the true noise model, fails to recover a word drawn
// from the prior and corrupted by substitution noise.
struct ComplexityEstimate {
  double theta = 0.0;
  double std_error = 0.0;  // sqrt(theta (1 - theta) / n), Bernoulli plug-in
  std::uint64_t n_samples = 0;
  std::uint64_t errors = 0;
  double gamma = 1.0;
  Subset subset = Subset::kAll;
  std::uint64_t seed = 0;
};

struct EstimateOptions {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  // Samples are split into `shards` contiguous ranges. Sample i always uses
  // generator stream i of `seed`, so the result does not depend on shards or
  // threads.
  std::size_t shards = 1;
  std::size_t threads = 0;  // 0: one per hardware thread, capped at shards
};

// Holds the decoder for one (vocabulary, model) pair so several subsets can be
// estimated without rebuilding it. Words are always decoded against the full
// vocabulary; `subset` only restricts which words are sampled.
class ComplexityEstimator {
 public:
  ComplexityEstimator(const Vocabulary& vocab, const ConfusionModel& model);

  // Throws ocrplex::Error for an empty subset or n_samples == 0.
  ComplexityEstimate Estimate(Subset subset,
                              const EstimateOptions& options) const;

  // Exact expectation by enumerating every observation of every subset word.
  // Throws if the number of (word, observation) terms exceeds max_terms.
  double Exhaustive(Subset subset,
                    std::uint64_t max_terms = kDefaultMaxTerms) const;

  static constexpr std::uint64_t kDefaultMaxTerms = 10'000'000;

  const UnigramDecoder& decoder() const { return decoder_; }

 private:
  Vocabulary vocab_;
  ConfusionModel model_;
  UnigramDecoder decoder_;
  NoiseSampler sampler_;
};

ComplexityEstimate EstimateTheta(const Vocabulary& vocab,
                                 const ConfusionModel& model, Subset subset,
                                 const EstimateOptions& options);

double ExhaustiveTheta(
    const Vocabulary& vocab, const ConfusionModel& model, Subset subset,
    std::uint64_t max_terms = ComplexityEstimator::kDefaultMaxTerms);

struct SweepReport {
  std::string corpus;
  std::string model;
  std::uint64_t seed = 0;  // master seed; rows carry their derived seeds
  std::vector<ComplexityEstimate> rows;
};

// 0.1, 0.2, ..., 1.0
std::vector<double> DefaultGammaGrid();

// Seed used for the (gamma, subset) row of a sweep with the given master seed.
std::uint64_t SweepRowSeed(std::uint64_t master_seed, double gamma,
                           Subset subset);

// One estimate per (gamma, subset) on Interpolate(base_model, gamma). Gammas
// must be strictly increasing within [0, 1]; subsets must be distinct.
// options.seed is the master seed.
SweepReport GammaSweep(const Vocabulary& vocab,
                       const ConfusionModel& base_model,
                       std::span<const double> gammas,
                       std::span<const Subset> subsets,
                       const EstimateOptions& options);

// Report serialization. CSV columns:
//   corpus,model,subset,gamma,theta,std_error,n_samples,seed
std::string SweepReportCsv(const SweepReport& report);
std::string SweepReportJson(const SweepReport& report);
// 800x500 line chart of theta against gamma, one polyline per subset.
std::string SweepReportSvg(const SweepReport& report);

}  // namespace ocrplex

#endif  // OCRPLEX_COMPLEXITY_H_
