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

#ifndef OCRPLEX_CHANNEL_H_
#define OCRPLEX_CHANNEL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ocrplex/corpus.h"
#include "ocrplex/noise.h"

namespace ocrplex {

// Log-probabilities are compared as fixed-point integers with 2^-36
// resolution. Integer sums are exact and order-independent, so candidates
// whose scores are mathematically tied compare equal and fall through to the
// tie-break rules.
using FixedLogProb = std::int64_t;
inline constexpr double kFixedLogScale = 68719476736.0;  // 2^36
inline constexpr double kLogFloor = -745.0;

FixedLogProb ToFixedLog(double probability);  // requires probability > 0
inline double FromFixedLog(FixedLogProb value) {
  return static_cast<double>(value) / kFixedLogScale;
}

struct Candidate {
  std::string word;
  double prior;
};

// Vocabulary words bucketed by length in code points. Within a bucket the
// order is descending prior then ascending word, which is also the tie-break
// order of the decoders.
class CandidateIndex {
 public:
  CandidateIndex() = default;

  // Priors need not be normalized. Throws on duplicate words or negative
  // priors.
  static CandidateIndex FromPriors(
      std::vector<std::pair<std::string, double>> priors);

  std::span<const Candidate> Bucket(std::size_t length) const;
  const std::map<std::size_t, std::vector<Candidate>>& buckets() const {
    return by_length_;
  }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  std::map<std::size_t, std::vector<Candidate>> by_length_;
  std::size_t size_ = 0;
};

CandidateIndex BuildCandidateIndex(const Vocabulary& vocab);

// Optimal unigram noisy-channel decoder: argmax_w p(o|w) p(w) over the
// same-length bucket, returning the observation when no candidate has a
// non-zero score. Immutable after construction.
class UnigramDecoder {
 public:
  static constexpr std::int32_t kKeepObservation = -1;

  UnigramDecoder(const CandidateIndex& index, const ConfusionModel& model);

  // Id of the chosen candidate, or kKeepObservation.
  std::int32_t DecodeEncoded(std::span<const std::int32_t> observed) const;
  std::string Decode(std::string_view observed) const;

  // Every candidate with a finite score for `observed`, in bucket order.
  // An empty result means the observation would be kept.
  struct Scored {
    std::int32_t id;
    FixedLogProb emission;  // log p(o|w)
  };
  std::vector<Scored> ScoreAll(std::span<const std::int32_t> observed) const;

  std::int32_t IdOf(std::string_view word) const;
  const std::string& Word(std::int32_t id) const { return words_[id]; }
  double Prior(std::int32_t id) const { return priors_[id]; }
  // Position of the candidate within its bucket; smaller wins ties.
  std::int32_t Rank(std::int32_t id) const { return ranks_[id]; }
  std::span<const std::int32_t> EncodedWord(std::int32_t id) const;
  std::size_t size() const { return words_.size(); }

  const Alphabet& alphabet() const { return alphabet_; }

 private:
  struct Bucket {
    std::size_t length = 0;
    std::vector<std::int32_t> ids;          // scorable candidates, in order
    std::vector<std::int32_t> chars;        // length * ids.size()
    std::vector<FixedLogProb> log_priors;   // parallel to ids
  };

  const Bucket* FindBucket(std::size_t length) const;

  Alphabet alphabet_;
  std::size_t alphabet_size_ = 0;
  std::vector<FixedLogProb> log_sub_;        // row-major, kImpossible for 0
  std::vector<FixedLogProb> column_max_;
  std::vector<std::string> words_;
  std::vector<double> priors_;
  std::vector<std::int32_t> ranks_;
  std::vector<std::size_t> offsets_;         // into encoded_
  std::vector<std::int32_t> encoded_;
  std::unordered_map<std::string, std::int32_t> ids_;
  std::vector<Bucket> buckets_;
  std::vector<std::int32_t> bucket_of_length_;
};

std::string DenoiseWord(std::string_view observed, const CandidateIndex& index,
                        const ConfusionModel& model);

TokenSequence DenoiseSequenceUnigram(std::span<const std::string> observed,
                                     const UnigramDecoder& decoder);
TokenSequence DenoiseSequenceUnigram(std::span<const std::string> observed,
                                     const CandidateIndex& index,
                                     const ConfusionModel& model);

// Interpolated bigram prior:
//   p(w | prev) = lambda * c(prev, w) / c(prev, .) + (1 - lambda) * p(w)
// falling back to p(w) when prev has no recorded continuation (or there is no
// prev). lambda = 0 makes it the unigram prior.
class BigramPrior {
 public:
  static constexpr double kDefaultBackoff = 0.7;

  // Throws unless 0 <= backoff_weight < 1.
  BigramPrior(Vocabulary unigram, double backoff_weight = kDefaultBackoff);

  // Unigram and bigram counts from every sequence; bigrams never cross
  // sequence boundaries.
  static BigramPrior FromSequences(std::span<const TokenSequence> sequences,
                                   double backoff_weight = kDefaultBackoff);

  // Both words must be in the unigram vocabulary.
  void AddBigram(std::string_view prev, std::string_view word,
                 std::uint64_t count = 1);

  double Probability(std::string_view word,
                     std::optional<std::string_view> prev) const;

  const Vocabulary& unigram() const { return unigram_; }
  double backoff_weight() const { return backoff_; }
  std::uint64_t BigramCount(std::string_view prev,
                            std::string_view word) const;

 private:
  struct Continuations {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t, std::less<>> counts;
  };

  Vocabulary unigram_;
  double backoff_;
  std::map<std::string, Continuations, std::less<>> bigrams_;
};

struct BeamConfig {
  std::size_t width = 8;
};

struct BeamResult {
  TokenSequence tokens;
  // Sum over positions of log p(o_i|w_i) + log p(w_i|w_{i-1}).
  double log_score = 0.0;
};

// Left-to-right beam search over per-position candidate pools (the
// same-length bucket, or the observation itself when nothing in the bucket is
// possible). Hypotheses ending in the same word are recombined.
BeamResult DecodeBeam(std::span<const std::string> observed,
                      const UnigramDecoder& decoder, const BigramPrior& prior,
                      BeamConfig config = {});

TokenSequence DenoiseSequenceBeam(std::span<const std::string> observed,
                                  const CandidateIndex& index,
                                  const ConfusionModel& model,
                                  const BigramPrior& prior,
                                  BeamConfig config = {});

}  // namespace ocrplex

#endif  // OCRPLEX_CHANNEL_H_
