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

#include "ocrplex/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ocrplex/error.h"
#include "ocrplex/utf8.h"

namespace ocrplex {
namespace {

constexpr FixedLogProb kImpossible = std::numeric_limits<FixedLogProb>::min();

FixedLogProb FlooredFixedLog(double probability) {
  static const FixedLogProb floor = std::llround(kLogFloor * kFixedLogScale);
  if (!(probability > 0.0)) return floor;
  return std::max(ToFixedLog(probability), floor);
}

bool CandidateBefore(const Candidate& a, const Candidate& b) {
  if (a.prior != b.prior) return a.prior > b.prior;
  return a.word < b.word;
}

}  // namespace

FixedLogProb ToFixedLog(double probability) {
  return std::llround(std::log(probability) * kFixedLogScale);
}

CandidateIndex CandidateIndex::FromPriors(
    std::vector<std::pair<std::string, double>> priors) {
  CandidateIndex index;
  for (auto& [word, prior] : priors) {
    if (!(prior >= 0.0)) {
      throw Error("prior of '" + word + "' must be non-negative");
    }
    index.by_length_[CodePointCount(word)].push_back(
        {std::move(word), prior});
    ++index.size_;
  }
  std::vector<std::string_view> all;
  all.reserve(index.size_);
  for (auto& [length, bucket] : index.by_length_) {
    std::sort(bucket.begin(), bucket.end(), CandidateBefore);
    for (const Candidate& c : bucket) all.push_back(c.word);
  }
  std::sort(all.begin(), all.end());
  if (auto dup = std::adjacent_find(all.begin(), all.end());
      dup != all.end()) {
    throw Error("duplicate candidate '" + std::string(*dup) + "'");
  }
  return index;
}

std::span<const Candidate> CandidateIndex::Bucket(std::size_t length) const {
  auto it = by_length_.find(length);
  if (it == by_length_.end()) return {};
  return it->second;
}

CandidateIndex BuildCandidateIndex(const Vocabulary& vocab) {
  std::vector<std::pair<std::string, double>> priors;
  priors.reserve(vocab.size());
  for (const auto& [word, count] : vocab.entries()) {
    priors.emplace_back(word, vocab.Frequency(word));
  }
  return CandidateIndex::FromPriors(std::move(priors));
}

UnigramDecoder::UnigramDecoder(const CandidateIndex& index,
                               const ConfusionModel& model)
    : alphabet_(model.alphabet()), alphabet_size_(model.size()) {
  const std::size_t n = alphabet_size_;
  log_sub_.resize(n * n);
  column_max_.assign(n, kImpossible);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = model.sub(i, j);
      const FixedLogProb value = p > 0.0 ? ToFixedLog(p) : kImpossible;
      log_sub_[i * n + j] = value;
      column_max_[j] = std::max(column_max_[j], value);
    }
  }

  words_.reserve(index.size());
  for (const auto& [length, candidates] : index.buckets()) {
    Bucket bucket;
    bucket.length = length;
    for (std::size_t rank = 0; rank < candidates.size(); ++rank) {
      const Candidate& candidate = candidates[rank];
      const auto id = static_cast<std::int32_t>(words_.size());
      words_.push_back(candidate.word);
      priors_.push_back(candidate.prior);
      ranks_.push_back(static_cast<std::int32_t>(rank));
      ids_.emplace(candidate.word, id);
      offsets_.push_back(encoded_.size());
      const std::vector<std::int32_t> chars = alphabet_.Encode(candidate.word);
      encoded_.insert(encoded_.end(), chars.begin(), chars.end());

      const bool scorable =
          candidate.prior > 0.0 &&
          std::find(chars.begin(), chars.end(), Alphabet::kAbsent) ==
              chars.end();
      if (!scorable) continue;
      bucket.ids.push_back(id);
      bucket.chars.insert(bucket.chars.end(), chars.begin(), chars.end());
      bucket.log_priors.push_back(ToFixedLog(candidate.prior));
    }
    if (bucket.length >= bucket_of_length_.size()) {
      bucket_of_length_.resize(bucket.length + 1, -1);
    }
    bucket_of_length_[bucket.length] =
        static_cast<std::int32_t>(buckets_.size());
    buckets_.push_back(std::move(bucket));
  }
  offsets_.push_back(encoded_.size());
}

const UnigramDecoder::Bucket* UnigramDecoder::FindBucket(
    std::size_t length) const {
  if (length >= bucket_of_length_.size()) return nullptr;
  const std::int32_t b = bucket_of_length_[length];
  return b < 0 ? nullptr : &buckets_[b];
}

std::int32_t UnigramDecoder::DecodeEncoded(
    std::span<const std::int32_t> observed) const {
  const Bucket* bucket = FindBucket(observed.size());
  if (bucket == nullptr || bucket->ids.empty()) return kKeepObservation;

  // Upper bound on log p(o|w) over all candidates, accumulated per column.
  FixedLogProb bound = 0;
  for (std::int32_t o : observed) {
    if (o == Alphabet::kAbsent || column_max_[o] == kImpossible) {
      return kKeepObservation;
    }
    bound += column_max_[o];
  }

  const std::size_t length = observed.size();
  const std::size_t n = alphabet_size_;
  bool found = false;
  FixedLogProb best = 0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < bucket->ids.size(); ++k) {
    const FixedLogProb log_prior = bucket->log_priors[k];
    // Priors only decrease from here and ties go to the earlier candidate.
    if (found && bound + log_prior <= best) break;
    const std::int32_t* chars = bucket->chars.data() + k * length;
    FixedLogProb score = log_prior;
    bool possible = true;
    for (std::size_t p = 0; p < length; ++p) {
      const FixedLogProb term = log_sub_[chars[p] * n + observed[p]];
      if (term == kImpossible) {
        possible = false;
        break;
      }
      score += term;
    }
    if (possible && (!found || score > best)) {
      found = true;
      best = score;
      best_k = k;
    }
  }
  return found ? bucket->ids[best_k] : kKeepObservation;
}

std::string UnigramDecoder::Decode(std::string_view observed) const {
  const std::int32_t id = DecodeEncoded(alphabet_.Encode(observed));
  return id == kKeepObservation ? std::string(observed) : words_[id];
}

std::vector<UnigramDecoder::Scored> UnigramDecoder::ScoreAll(
    std::span<const std::int32_t> observed) const {
  std::vector<Scored> out;
  const Bucket* bucket = FindBucket(observed.size());
  if (bucket == nullptr) return out;
  for (std::int32_t o : observed) {
    if (o == Alphabet::kAbsent) return out;
  }
  const std::size_t length = observed.size();
  const std::size_t n = alphabet_size_;
  for (std::size_t k = 0; k < bucket->ids.size(); ++k) {
    const std::int32_t* chars = bucket->chars.data() + k * length;
    FixedLogProb emission = 0;
    bool possible = true;
    for (std::size_t p = 0; p < length && possible; ++p) {
      const FixedLogProb term = log_sub_[chars[p] * n + observed[p]];
      possible = term != kImpossible;
      if (possible) emission += term;
    }
    if (possible) out.push_back({bucket->ids[k], emission});
  }
  return out;
}

std::int32_t UnigramDecoder::IdOf(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kKeepObservation : it->second;
}

std::span<const std::int32_t> UnigramDecoder::EncodedWord(
    std::int32_t id) const {
  return std::span(encoded_).subspan(offsets_[id],
                                     offsets_[id + 1] - offsets_[id]);
}

std::string DenoiseWord(std::string_view observed, const CandidateIndex& index,
                        const ConfusionModel& model) {
  return UnigramDecoder(index, model).Decode(observed);
}

TokenSequence DenoiseSequenceUnigram(std::span<const std::string> observed,
                                     const UnigramDecoder& decoder) {
  TokenSequence out;
  out.reserve(observed.size());
  for (const std::string& token : observed) {
    out.push_back(decoder.Decode(token));
  }
  return out;
}

TokenSequence DenoiseSequenceUnigram(std::span<const std::string> observed,
                                     const CandidateIndex& index,
                                     const ConfusionModel& model) {
  return DenoiseSequenceUnigram(observed, UnigramDecoder(index, model));
}

BigramPrior::BigramPrior(Vocabulary unigram, double backoff_weight)
    : unigram_(std::move(unigram)), backoff_(backoff_weight) {
  if (!(backoff_weight >= 0.0 && backoff_weight < 1.0)) {
    throw Error("backoff weight must lie in [0, 1)");
  }
}

BigramPrior BigramPrior::FromSequences(
    std::span<const TokenSequence> sequences, double backoff_weight) {
  Vocabulary unigram;
  for (const TokenSequence& seq : sequences) {
    for (const std::string& token : seq) unigram.Add(token);
  }
  BigramPrior prior(std::move(unigram), backoff_weight);
  for (const TokenSequence& seq : sequences) {
    for (std::size_t i = 1; i < seq.size(); ++i) {
      prior.AddBigram(seq[i - 1], seq[i]);
    }
  }
  return prior;
}

void BigramPrior::AddBigram(std::string_view prev, std::string_view word,
                            std::uint64_t count) {
  if (!unigram_.Contains(prev) || !unigram_.Contains(word)) {
    throw Error("bigram words must belong to the unigram vocabulary");
  }
  if (count == 0) return;
  auto it = bigrams_.find(prev);
  if (it == bigrams_.end()) {
    it = bigrams_.emplace(std::string(prev), Continuations{}).first;
  }
  auto& counts = it->second.counts;
  auto jt = counts.find(word);
  if (jt == counts.end()) {
    counts.emplace(std::string(word), count);
  } else {
    jt->second += count;
  }
  it->second.total += count;
}

std::uint64_t BigramPrior::BigramCount(std::string_view prev,
                                       std::string_view word) const {
  auto it = bigrams_.find(prev);
  if (it == bigrams_.end()) return 0;
  auto jt = it->second.counts.find(word);
  return jt == it->second.counts.end() ? 0 : jt->second;
}

double BigramPrior::Probability(std::string_view word,
                                std::optional<std::string_view> prev) const {
  const double unigram = unigram_.Frequency(word);
  if (!prev) return unigram;
  auto it = bigrams_.find(*prev);
  if (it == bigrams_.end() || it->second.total == 0) return unigram;
  const double conditional =
      static_cast<double>(BigramCount(*prev, word)) /
      static_cast<double>(it->second.total);
  return backoff_ * conditional + (1.0 - backoff_) * unigram;
}

BeamResult DecodeBeam(std::span<const std::string> observed,
                      const UnigramDecoder& decoder, const BigramPrior& prior,
                      BeamConfig config) {
  if (config.width < 1) throw Error("beam width must be at least 1");

  struct Node {
    std::int32_t parent;
    std::int32_t id;  // kKeepObservation: the observed token itself
    FixedLogProb total;
  };
  // history[t] holds the surviving hypotheses after position t, best first.
  std::vector<std::vector<Node>> history;
  history.reserve(observed.size());
  const FixedLogProb fallback_score = FlooredFixedLog(0.0);

  auto word_of = [&](std::size_t t, const Node& node) -> std::string_view {
    return node.id == UnigramDecoder::kKeepObservation
               ? std::string_view(observed[t])
               : std::string_view(decoder.Word(node.id));
  };

  for (std::size_t t = 0; t < observed.size(); ++t) {
    std::vector<UnigramDecoder::Scored> pool =
        decoder.ScoreAll(decoder.alphabet().Encode(observed[t]));
    const bool keep_observation = pool.empty();
    if (keep_observation) {
      pool.push_back({UnigramDecoder::kKeepObservation, fallback_score});
    }

    const std::size_t parents = t == 0 ? 1 : history[t - 1].size();
    std::vector<Node> expansions;
    expansions.reserve(pool.size());
    for (const UnigramDecoder::Scored& candidate : pool) {
      Node best{-1, candidate.id, 0};
      for (std::size_t h = 0; h < parents; ++h) {
        FixedLogProb total = candidate.emission;
        if (t > 0) {
          const Node& parent = history[t - 1][h];
          total += parent.total;
          if (!keep_observation) {
            total += FlooredFixedLog(prior.Probability(
                decoder.Word(candidate.id), word_of(t - 1, parent)));
          }
        } else if (!keep_observation) {
          total += FlooredFixedLog(
              prior.Probability(decoder.Word(candidate.id), std::nullopt));
        }
        // Recombination: keep the best-scoring parent, earliest on ties.
        if (best.parent < 0 || total > best.total) {
          best = {static_cast<std::int32_t>(h), candidate.id, total};
        }
      }
      expansions.push_back(best);
    }
    // Pool order is bucket order, so a stable sort breaks score ties by
    // higher prior, then by word.
    std::stable_sort(expansions.begin(), expansions.end(),
                     [](const Node& a, const Node& b) {
                       return a.total > b.total;
                     });
    if (expansions.size() > config.width) expansions.resize(config.width);
    history.push_back(std::move(expansions));
  }

  BeamResult result;
  if (observed.empty()) return result;
  result.tokens.resize(observed.size());
  result.log_score = FromFixedLog(history.back().front().total);
  std::int32_t index = 0;
  for (std::size_t t = observed.size(); t > 0; --t) {
    const Node& node = history[t - 1][index];
    result.tokens[t - 1] = std::string(word_of(t - 1, node));
    index = node.parent;
  }
  return result;
}

TokenSequence DenoiseSequenceBeam(std::span<const std::string> observed,
                                  const CandidateIndex& index,
                                  const ConfusionModel& model,
                                  const BigramPrior& prior,
                                  BeamConfig config) {
  return DecodeBeam(observed, UnigramDecoder(index, model), prior, config)
      .tokens;
}

}  // namespace ocrplex
