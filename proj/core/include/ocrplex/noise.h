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

#ifndef OCRPLEX_NOISE_H_
#define OCRPLEX_NOISE_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ocrplex/random.h"

namespace ocrplex {

// Ordered set of distinct code points.
class Alphabet {
 public:
  static constexpr std::int32_t kAbsent = -1;

  Alphabet() = default;
  // Throws ocrplex::Error on duplicates.
  explicit Alphabet(std::vector<char32_t> chars);

  // Sorted distinct code points of all given strings.
  static Alphabet FromText(std::span<const std::string> texts);

  std::size_t size() const { return chars_.size(); }
  char32_t at(std::size_t i) const { return chars_[i]; }
  const std::vector<char32_t>& chars() const { return chars_; }

  // kAbsent for characters outside the alphabet.
  std::int32_t IndexOf(char32_t c) const;

  // Maps every code point of a UTF-8 word to its index or kAbsent.
  std::vector<std::int32_t> Encode(std::string_view word) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.chars_ == b.chars_;
  }

 private:
  std::vector<char32_t> chars_;
  std::vector<std::int32_t> ascii_;
  std::unordered_map<char32_t, std::int32_t> index_;
};

// Level of a noise model blended with the identity: gamma * M + (1-gamma) * I.
class NoiseLevel {
 public:
  // Throws ocrplex::Error outside [0, 1].
  explicit NoiseLevel(double gamma);
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

// Character-level channel. sub(i, j) = p(observe chars[j] | true chars[i]).
// Insertions and deletions only affect CorruptionMode::kFull; likelihood
// scoring is substitution-only.
class ConfusionModel {
 public:
  static constexpr double kTolerance = 1e-9;

  // `sub` is row-major |A| x |A|. Throws ocrplex::Error if a row or the
  // insertion distribution does not sum to one within kTolerance, if an entry
  // leaves [0, 1], or if p_insert + p_delete > 1.
  ConfusionModel(Alphabet alphabet, std::vector<double> sub, double p_insert,
                 double p_delete, std::vector<double> insert_dist);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  double sub(std::size_t from, std::size_t to) const {
    return sub_[from * size() + to];
  }
  std::span<const double> row(std::size_t from) const {
    return std::span(sub_).subspan(from * size(), size());
  }
  const std::vector<double>& sub_matrix() const { return sub_; }
  double p_insert() const { return p_insert_; }
  double p_delete() const { return p_delete_; }
  const std::vector<double>& insert_dist() const { return insert_dist_; }

  friend bool operator==(const ConfusionModel&,
                         const ConfusionModel&) = default;

 private:
  Alphabet alphabet_;
  std::vector<double> sub_;
  double p_insert_;
  double p_delete_;
  std::vector<double> insert_dist_;
};

// Diagonal 1 - epsilon, off-diagonal epsilon / (|A| - 1), no insertions or
// deletions. Requires |A| >= 2 and 0 <= epsilon < 1.
ConfusionModel UniformNoise(const Alphabet& alphabet, double epsilon);

ConfusionModel IdentityNoise(const Alphabet& alphabet);

struct AlignedPair {
  std::string gt;
  std::string ocr;
};

// Tallies of one unit-cost Levenshtein edit script.
struct EditCounts {
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
};

// Aligns gt against ocr with unit costs and walks the backtrace preferring
// match, then substitution, deletion, insertion. Calls
//   on_substitute(gt_char, ocr_char)   for matches and substitutions,
//   on_delete(gt_char), on_insert(ocr_char).
template <typename Sub, typename Del, typename Ins>
EditCounts AlignCharacters(std::u32string_view gt, std::u32string_view ocr,
                           Sub&& on_substitute, Del&& on_delete,
                           Ins&& on_insert);

// Estimates a model from aligned ground-truth/OCR pairs. Rows are additively
// smoothed: (count(i->j) + s) / (count(i->.) + s|A|). A row with no
// observations and zero smoothing is the identity row. Throws on empty input
// or negative smoothing.
ConfusionModel EstimateFromAligned(std::span<const AlignedPair> pairs,
                                   double smoothing = 0.1);

// gamma * sub + (1 - gamma) * I; insertion and deletion scaled by gamma.
ConfusionModel Interpolate(const ConfusionModel& model, NoiseLevel level);

// Product of per-character substitution probabilities; 0 for length mismatch
// or characters outside the alphabet.
double WordLikelihood(std::string_view observed, std::string_view truth,
                      const ConfusionModel& model);

enum class CorruptionMode { kSubstitutionOnly, kFull };

std::string_view CorruptionModeName(CorruptionMode mode);
// Accepts "substitution" / "substitution_only" / "full".
CorruptionMode ParseCorruptionMode(std::string_view name);

// Precomputed cumulative tables for drawing noisy characters. Immutable and
// safe to share across threads.
class NoiseSampler {
 public:
  explicit NoiseSampler(const ConfusionModel& model);

  const ConfusionModel& model() const { return model_; }

  // Characters outside the alphabet pass through unchanged.
  std::string Corrupt(std::string_view word, CorruptionMode mode,
                      CounterRng& rng) const;

  // Substitution-only corruption of an encoded word; kAbsent entries are kept.
  void CorruptEncoded(std::span<const std::int32_t> word,
                      std::span<std::int32_t> out, CounterRng& rng) const;

  std::int32_t SubstituteIndex(std::int32_t from, CounterRng& rng) const;

 private:
  std::int32_t Draw(std::span<const double> cumulative,
                    std::int32_t fallback, CounterRng& rng) const;

  ConfusionModel model_;
  std::vector<double> row_cumulative_;
  std::vector<std::int32_t> row_last_;
  std::vector<double> insert_cumulative_;
  std::int32_t insert_last_ = 0;
};

std::string CorruptWord(std::string_view word, const ConfusionModel& model,
                        CorruptionMode mode, CounterRng& rng);

// Mean confusion probability 1 - sub(i, i) over `chars` that are in the
// alphabet, both unweighted and weighted by `weights` (same length as chars;
// pass an empty span to weight uniformly).
struct ConfusionSummary {
  std::size_t characters = 0;
  double unweighted = 0.0;
  double weighted = 0.0;
};
ConfusionSummary AverageConfusion(const ConfusionModel& model,
                                  std::span<const char32_t> chars,
                                  std::span<const double> weights = {});

// Model file: {"alphabet": [...], "sub": [[...]], "p_insert": f,
// "p_delete": f, "insert_dist": [...]}. Rows whose sums are within 1e-6 of one
// are renormalized on load; anything further off is rejected.
std::string ModelToJson(const ConfusionModel& model);
ConfusionModel ModelFromJson(std::string_view json);
ConfusionModel LoadModel(const std::filesystem::path& path);

// JSONL lines {"gt": string, "ocr": string}.
std::vector<AlignedPair> LoadAlignedPairs(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

template <typename Sub, typename Del, typename Ins>
EditCounts AlignCharacters(std::u32string_view gt, std::u32string_view ocr,
                           Sub&& on_substitute, Del&& on_delete,
                           Ins&& on_insert) {
  const std::size_t n = gt.size();
  const std::size_t m = ocr.size();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> dist((n + 1) * width);
  for (std::size_t j = 0; j <= m; ++j) dist[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    dist[i * width] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag =
          dist[(i - 1) * width + j - 1] + (gt[i - 1] == ocr[j - 1] ? 0 : 1);
      const std::uint32_t up = dist[(i - 1) * width + j] + 1;
      const std::uint32_t left = dist[i * width + j - 1] + 1;
      dist[i * width + j] = std::min({diag, up, left});
    }
  }

  struct Step {
    enum Kind { kSubstitute, kDelete, kInsert } kind;
    std::size_t i, j;
  };
  std::vector<Step> script;
  EditCounts counts;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = dist[i * width + j];
    if (i > 0 && j > 0 && gt[i - 1] == ocr[j - 1] &&
        here == dist[(i - 1) * width + j - 1]) {
      ++counts.matches;
      script.push_back({Step::kSubstitute, i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && j > 0 && here == dist[(i - 1) * width + j - 1] + 1) {
      ++counts.substitutions;
      script.push_back({Step::kSubstitute, i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && here == dist[(i - 1) * width + j] + 1) {
      ++counts.deletions;
      script.push_back({Step::kDelete, i - 1, j});
      --i;
    } else {
      ++counts.insertions;
      script.push_back({Step::kInsert, i, j - 1});
      --j;
    }
  }
  for (auto it = script.rbegin(); it != script.rend(); ++it) {
    switch (it->kind) {
      case Step::kSubstitute:
        on_substitute(gt[it->i], ocr[it->j]);
        break;
      case Step::kDelete:
        on_delete(gt[it->i]);
        break;
      case Step::kInsert:
        on_insert(ocr[it->j]);
        break;
    }
  }
  return counts;
}

}  // namespace ocrplex

#endif  // OCRPLEX_NOISE_H_
