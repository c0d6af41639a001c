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

#include "ocrplex/noise.h"

#include <cmath>
#include <map>
#include <utility>

#include "ocrplex/error.h"
#include "ocrplex/utf8.h"

namespace ocrplex {
namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

void CheckDistribution(std::span<const double> values, const std::string& what,
                       double tolerance) {
  double sum = 0.0;
  for (double v : values) {
    if (!IsProbability(v)) {
      throw Error(what + " has an entry outside [0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw Error(what + " sums to " + std::to_string(sum) + ", not 1");
  }
}

std::vector<double> Cumulative(std::span<const double> probabilities) {
  std::vector<double> out(probabilities.size());
  double running = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    running += probabilities[i];
    out[i] = running;
  }
  return out;
}

std::int32_t LastPositive(std::span<const double> probabilities) {
  for (std::size_t i = probabilities.size(); i > 0; --i) {
    if (probabilities[i - 1] > 0.0) return static_cast<std::int32_t>(i - 1);
  }
  return 0;
}

}  // namespace

Alphabet::Alphabet(std::vector<char32_t> chars)
    : chars_(std::move(chars)), ascii_(128, kAbsent) {
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    const auto index = static_cast<std::int32_t>(i);
    if (!index_.emplace(chars_[i], index).second) {
      throw Error("alphabet contains a duplicate character");
    }
    if (chars_[i] < 128) ascii_[chars_[i]] = index;
  }
}

Alphabet Alphabet::FromText(std::span<const std::string> texts) {
  std::vector<char32_t> chars;
  for (const std::string& text : texts) {
    for (char32_t c : DecodeUtf8(text)) chars.push_back(c);
  }
  std::sort(chars.begin(), chars.end());
  chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
  return Alphabet(std::move(chars));
}

std::int32_t Alphabet::IndexOf(char32_t c) const {
  if (c < 128) return ascii_.empty() ? kAbsent : ascii_[c];
  auto it = index_.find(c);
  return it == index_.end() ? kAbsent : it->second;
}

std::vector<std::int32_t> Alphabet::Encode(std::string_view word) const {
  const std::u32string chars = DecodeUtf8(word);
  std::vector<std::int32_t> out(chars.size());
  for (std::size_t i = 0; i < chars.size(); ++i) out[i] = IndexOf(chars[i]);
  return out;
}

NoiseLevel::NoiseLevel(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error("noise level gamma must lie in [0, 1], got " +
                std::to_string(gamma));
  }
}

ConfusionModel::ConfusionModel(Alphabet alphabet, std::vector<double> sub,
                               double p_insert, double p_delete,
                               std::vector<double> insert_dist)
    : alphabet_(std::move(alphabet)),
      sub_(std::move(sub)),
      p_insert_(p_insert),
      p_delete_(p_delete),
      insert_dist_(std::move(insert_dist)) {
  const std::size_t n = alphabet_.size();
  if (n == 0) throw Error("confusion model needs a non-empty alphabet");
  if (sub_.size() != n * n) {
    throw Error("substitution matrix must be " + std::to_string(n) + "x" +
                std::to_string(n));
  }
  if (insert_dist_.size() != n) {
    throw Error("insertion distribution must have one entry per character");
  }
  for (std::size_t i = 0; i < n; ++i) {
    CheckDistribution(row(i), "substitution row " + std::to_string(i),
                      kTolerance);
  }
  CheckDistribution(insert_dist_, "insertion distribution", kTolerance);
  if (!IsProbability(p_insert_) || !IsProbability(p_delete_)) {
    throw Error("insertion and deletion probabilities must lie in [0, 1]");
  }
  if (p_insert_ + p_delete_ > 1.0) {
    throw Error("p_insert + p_delete must not exceed 1");
  }
}

ConfusionModel UniformNoise(const Alphabet& alphabet, double epsilon) {
  const std::size_t n = alphabet.size();
  if (n < 2) throw Error("uniform noise needs an alphabet of at least 2");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error("epsilon must lie in [0, 1)");
  }
  const double off = epsilon / static_cast<double>(n - 1);
  std::vector<double> sub(n * n, off);
  for (std::size_t i = 0; i < n; ++i) sub[i * n + i] = 1.0 - epsilon;
  return ConfusionModel(alphabet, std::move(sub), 0.0, 0.0,
                        std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ConfusionModel IdentityNoise(const Alphabet& alphabet) {
  const std::size_t n = alphabet.size();
  std::vector<double> sub(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sub[i * n + i] = 1.0;
  return ConfusionModel(alphabet, std::move(sub), 0.0, 0.0,
                        std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ConfusionModel EstimateFromAligned(std::span<const AlignedPair> pairs,
                                   double smoothing) {
  if (pairs.empty()) throw Error("no aligned pairs to estimate from");
  if (!(smoothing >= 0.0)) throw Error("smoothing must be non-negative");

  std::vector<std::pair<std::u32string, std::u32string>> decoded;
  decoded.reserve(pairs.size());
  std::vector<char32_t> seen;
  for (const AlignedPair& pair : pairs) {
    decoded.emplace_back(DecodeUtf8(pair.gt), DecodeUtf8(pair.ocr));
    seen.insert(seen.end(), decoded.back().first.begin(),
                decoded.back().first.end());
    seen.insert(seen.end(), decoded.back().second.begin(),
                decoded.back().second.end());
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  if (seen.empty()) throw Error("aligned pairs contain no characters");
  Alphabet alphabet(std::move(seen));
  const std::size_t n = alphabet.size();

  std::vector<double> sub_counts(n * n, 0.0);
  std::vector<double> insert_counts(n, 0.0);
  std::size_t gt_chars = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  for (const auto& [gt, ocr] : decoded) {
    gt_chars += gt.size();
    AlignCharacters(
        gt, ocr,
        [&](char32_t from, char32_t to) {
          sub_counts[alphabet.IndexOf(from) * n + alphabet.IndexOf(to)] += 1;
        },
        [&](char32_t) { ++deletions; },
        [&](char32_t c) {
          insert_counts[alphabet.IndexOf(c)] += 1;
          ++insertions;
        });
  }

  std::vector<double> sub(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_total = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_total += sub_counts[i * n + j];
    const double denominator = row_total + smoothing * static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      sub[i * n + j] = denominator > 0.0
                           ? (sub_counts[i * n + j] + smoothing) / denominator
                           : (i == j ? 1.0 : 0.0);
    }
  }

  std::vector<double> insert_dist(n);
  const double insert_denominator =
      static_cast<double>(insertions) + smoothing * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    insert_dist[j] = insert_denominator > 0.0
                         ? (insert_counts[j] + smoothing) / insert_denominator
                         : 1.0 / static_cast<double>(n);
  }

  const double chars = static_cast<double>(gt_chars);
  const double p_delete = gt_chars > 0 ? deletions / chars : 0.0;
  const double p_insert =
      gt_chars > 0 ? std::min(1.0 - p_delete, insertions / chars) : 0.0;
  return ConfusionModel(std::move(alphabet), std::move(sub), p_insert,
                        p_delete, std::move(insert_dist));
}

ConfusionModel Interpolate(const ConfusionModel& model, NoiseLevel level) {
  const double gamma = level.gamma();
  const std::size_t n = model.size();
  std::vector<double> sub(model.sub_matrix());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sub[i * n + j] = gamma * sub[i * n + j] + (1.0 - gamma) * (i == j);
    }
  }
  return ConfusionModel(model.alphabet(), std::move(sub),
                        gamma * model.p_insert(), gamma * model.p_delete(),
                        model.insert_dist());
}

double WordLikelihood(std::string_view observed, std::string_view truth,
                      const ConfusionModel& model) {
  const std::u32string o = DecodeUtf8(observed);
  const std::u32string w = DecodeUtf8(truth);
  if (o.size() != w.size()) return 0.0;
  const Alphabet& alphabet = model.alphabet();
  double p = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::int32_t from = alphabet.IndexOf(w[i]);
    const std::int32_t to = alphabet.IndexOf(o[i]);
    if (from == Alphabet::kAbsent || to == Alphabet::kAbsent) return 0.0;
    p *= model.sub(from, to);
  }
  return p;
}

std::string_view CorruptionModeName(CorruptionMode mode) {
  return mode == CorruptionMode::kFull ? "full" : "substitution";
}

CorruptionMode ParseCorruptionMode(std::string_view name) {
  if (name == "substitution" || name == "substitution_only") {
    return CorruptionMode::kSubstitutionOnly;
  }
  if (name == "full") return CorruptionMode::kFull;
  throw Error("unknown corruption mode '" + std::string(name) +
              "' (expected substitution or full)");
}

NoiseSampler::NoiseSampler(const ConfusionModel& model) : model_(model) {
  const std::size_t n = model_.size();
  row_cumulative_.reserve(n * n);
  row_last_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> c = Cumulative(model_.row(i));
    row_cumulative_.insert(row_cumulative_.end(), c.begin(), c.end());
    row_last_.push_back(LastPositive(model_.row(i)));
  }
  insert_cumulative_ = Cumulative(model_.insert_dist());
  insert_last_ = LastPositive(model_.insert_dist());
}

std::int32_t NoiseSampler::Draw(std::span<const double> cumulative,
                                std::int32_t fallback,
                                CounterRng& rng) const {
  const double u = rng.NextDouble();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return fallback;
  return static_cast<std::int32_t>(it - cumulative.begin());
}

std::int32_t NoiseSampler::SubstituteIndex(std::int32_t from,
                                           CounterRng& rng) const {
  const std::size_t n = model_.size();
  return Draw(std::span(row_cumulative_).subspan(from * n, n),
              row_last_[from], rng);
}

void NoiseSampler::CorruptEncoded(std::span<const std::int32_t> word,
                                  std::span<std::int32_t> out,
                                  CounterRng& rng) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    out[i] = word[i] == Alphabet::kAbsent ? Alphabet::kAbsent
                                          : SubstituteIndex(word[i], rng);
  }
}

std::string NoiseSampler::Corrupt(std::string_view word, CorruptionMode mode,
                                  CounterRng& rng) const {
  const Alphabet& alphabet = model_.alphabet();
  const bool full = mode == CorruptionMode::kFull;
  const double p_insert = model_.p_insert();
  const double p_delete = model_.p_delete();
  std::string out;
  out.reserve(word.size() + 4);

  auto maybe_insert = [&] {
    if (full && p_insert > 0.0 && rng.Bernoulli(p_insert)) {
      AppendUtf8(alphabet.at(Draw(insert_cumulative_, insert_last_, rng)),
                 out);
    }
  };

  maybe_insert();
  for (char32_t c : DecodeUtf8(word)) {
    const std::int32_t index = alphabet.IndexOf(c);
    if (index == Alphabet::kAbsent) {
      AppendUtf8(c, out);
    } else {
      if (full && p_delete > 0.0 && rng.Bernoulli(p_delete)) continue;
      AppendUtf8(alphabet.at(SubstituteIndex(index, rng)), out);
    }
    maybe_insert();
  }
  return out;
}

std::string CorruptWord(std::string_view word, const ConfusionModel& model,
                        CorruptionMode mode, CounterRng& rng) {
  return NoiseSampler(model).Corrupt(word, mode, rng);
}

ConfusionSummary AverageConfusion(const ConfusionModel& model,
                                  std::span<const char32_t> chars,
                                  std::span<const double> weights) {
  if (!weights.empty() && weights.size() != chars.size()) {
    throw Error("weights must match characters one to one");
  }
  ConfusionSummary summary;
  double weight_total = 0.0;
  for (std::size_t k = 0; k < chars.size(); ++k) {
    const std::int32_t i = model.alphabet().IndexOf(chars[k]);
    if (i == Alphabet::kAbsent) continue;
    const double confusion = 1.0 - model.sub(i, i);
    const double weight = weights.empty() ? 1.0 : weights[k];
    ++summary.characters;
    summary.unweighted += confusion;
    summary.weighted += weight * confusion;
    weight_total += weight;
  }
  if (summary.characters > 0) {
    summary.unweighted /= static_cast<double>(summary.characters);
  }
  if (weight_total > 0.0) summary.weighted /= weight_total;
  return summary;
}

}  // namespace ocrplex
