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
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ocrplex/error.h"
#include "ocrplex/utf8.h"
#include "test_util.h"

namespace ocrplex {
namespace {

using testing::LetterAlphabet;
using testing::RandomModel;

void ExpectRowsStochastic(const ConfusionModel& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    double sum = 0.0;
    for (double p : m.row(i)) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9) << "row " << i;
  }
}

double SubOf(const ConfusionModel& m, char32_t from, char32_t to) {
  return m.sub(m.alphabet().IndexOf(from), m.alphabet().IndexOf(to));
}

TEST(AlphabetTest, IndexIsInverseOfChars) {
  const Alphabet a({U'z', U'é', U'1'});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.IndexOf(a.at(i)), static_cast<std::int32_t>(i));
  }
  EXPECT_EQ(a.IndexOf(U'q'), Alphabet::kAbsent);
  EXPECT_EQ(a.Encode("éq1"),
            (std::vector<std::int32_t>{1, Alphabet::kAbsent, 2}));
  EXPECT_THROW(Alphabet({U'a', U'a'}), Error);
}

TEST(AlphabetTest, FromTextIsSortedAndDistinct) {
  const std::vector<std::string> texts = {"cab", "bé", ""};
  EXPECT_EQ(Alphabet::FromText(texts).chars(),
            (std::vector<char32_t>{U'a', U'b', U'c', U'é'}));
}

TEST(NoiseLevelTest, Range) {
  EXPECT_EQ(NoiseLevel(0.0).gamma(), 0.0);
  EXPECT_EQ(NoiseLevel(1.0).gamma(), 1.0);
  EXPECT_THROW(NoiseLevel(-0.01), Error);
  EXPECT_THROW(NoiseLevel(1.01), Error);
  EXPECT_THROW(NoiseLevel(std::nan("")), Error);
}

TEST(ConfusionModelTest, RejectsInvalidConstruction) {
  const Alphabet ab = LetterAlphabet(2);
  const std::vector<double> uniform = {0.5, 0.5};
  EXPECT_THROW(ConfusionModel(ab, {0.9, 0.2, 0.0, 1.0}, 0, 0, uniform), Error);
  EXPECT_THROW(ConfusionModel(ab, {1.5, -0.5, 0.0, 1.0}, 0, 0, uniform),
               Error);
  EXPECT_THROW(ConfusionModel(ab, {1.0, 0.0}, 0, 0, uniform), Error);
  EXPECT_THROW(ConfusionModel(ab, {1, 0, 0, 1}, 0, 0, {0.7, 0.7}), Error);
  EXPECT_THROW(ConfusionModel(ab, {1, 0, 0, 1}, 0.6, 0.5, uniform), Error);
  EXPECT_THROW(ConfusionModel(ab, {1, 0, 0, 1}, 1.2, 0.0, uniform), Error);
  EXPECT_NO_THROW(ConfusionModel(ab, {1, 0, 0, 1}, 0.0, 1.0, uniform));
}

TEST(UniformNoiseTest, Examples) {
  const ConfusionModel m = UniformNoise(LetterAlphabet(3), 0.07);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(m.sub(i, j), i == j ? 0.93 : 0.035, 1e-15);
    }
  }
  EXPECT_EQ(m.p_insert(), 0.0);
  EXPECT_EQ(m.p_delete(), 0.0);
  EXPECT_EQ(m.insert_dist(), (std::vector<double>(3, 1.0 / 3.0)));

  EXPECT_EQ(UniformNoise(LetterAlphabet(2), 0.0).sub_matrix(),
            (std::vector<double>{1, 0, 0, 1}));
  const ConfusionModel m2 = UniformNoise(LetterAlphabet(2), 0.2);
  EXPECT_NEAR(m2.sub(0, 0), 0.8, 1e-15);
  EXPECT_NEAR(m2.sub(0, 1), 0.2, 1e-15);
  EXPECT_NEAR(m2.sub(1, 0), 0.2, 1e-15);
  EXPECT_NEAR(m2.sub(1, 1), 0.8, 1e-15);
}

TEST(UniformNoiseTest, Errors) {
  EXPECT_THROW(UniformNoise(LetterAlphabet(1), 0.1), Error);
  EXPECT_THROW(UniformNoise(LetterAlphabet(3), 1.0), Error);
  EXPECT_THROW(UniformNoise(LetterAlphabet(3), -0.1), Error);
}

TEST(AlignCharactersTest, PrefersMatchThenSubstitution) {
  std::vector<std::string> ops;
  auto sub = [&](char32_t a, char32_t b) {
    ops.push_back(std::string(a == b ? "=" : "~") + EncodeUtf8(std::u32string{a}) +
                  EncodeUtf8(std::u32string{b}));
  };
  auto del = [&](char32_t a) { ops.push_back("-" + EncodeUtf8(std::u32string{a})); };
  auto ins = [&](char32_t b) { ops.push_back("+" + EncodeUtf8(std::u32string{b})); };

  EditCounts c = AlignCharacters(U"cat", U"cot", sub, del, ins);
  EXPECT_EQ(ops, (std::vector<std::string>{"=cc", "~ao", "=tt"}));
  EXPECT_EQ(c.matches, 2u);
  EXPECT_EQ(c.substitutions, 1u);

  ops.clear();
  c = AlignCharacters(U"ab", U"b", sub, del, ins);
  EXPECT_EQ(ops, (std::vector<std::string>{"-a", "=bb"}));
  EXPECT_EQ(c.deletions, 1u);

  ops.clear();
  c = AlignCharacters(U"", U"xy", sub, del, ins);
  EXPECT_EQ(ops, (std::vector<std::string>{"+x", "+y"}));
  EXPECT_EQ(c.insertions, 2u);
}

TEST(AlignCharactersTest, CostEqualsLevenshtein) {
  std::mt19937_64 g(11);
  const Alphabet abc = LetterAlphabet(3);
  std::uniform_int_distribution<std::size_t> len(0, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::u32string a = DecodeUtf8(testing::RandomWord(abc, len(g), g));
    const std::u32string b = DecodeUtf8(testing::RandomWord(abc, len(g), g));
    // Independent recursive-free reference: full DP table.
    std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                            std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      for (std::size_t j = 1; j <= b.size(); ++j) {
        d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                            d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
      }
    }
    std::size_t gt_seen = 0, ocr_seen = 0;
    const EditCounts c = AlignCharacters(
        a, b, [&](char32_t, char32_t) { ++gt_seen, ++ocr_seen; },
        [&](char32_t) { ++gt_seen; }, [&](char32_t) { ++ocr_seen; });
    EXPECT_EQ(c.substitutions + c.deletions + c.insertions, d[a.size()][b.size()]);
    EXPECT_EQ(gt_seen, a.size());
    EXPECT_EQ(ocr_seen, b.size());
  }
}

TEST(EstimateFromAlignedTest, Examples) {
  std::vector<AlignedPair> pairs = {{"cat", "cat"}};
  ConfusionModel m = EstimateFromAligned(pairs, 0.0);
  EXPECT_EQ(m, IdentityNoise(Alphabet({U'a', U'c', U't'})));
  EXPECT_EQ(m.p_insert(), 0.0);
  EXPECT_EQ(m.p_delete(), 0.0);

  pairs = {{"cat", "cot"}};
  m = EstimateFromAligned(pairs, 0.0);
  EXPECT_EQ(SubOf(m, U'a', U'o'), 1.0);
  EXPECT_EQ(SubOf(m, U'c', U'c'), 1.0);
  EXPECT_EQ(SubOf(m, U't', U't'), 1.0);
  EXPECT_EQ(m.p_delete(), 0.0);

  pairs = {{"ab", "b"}};
  m = EstimateFromAligned(pairs, 0.0);
  EXPECT_EQ(m.p_delete(), 0.5);
  EXPECT_EQ(SubOf(m, U'b', U'b'), 1.0);
}

TEST(EstimateFromAlignedTest, SmoothingAndInsertions) {
  const std::vector<AlignedPair> pairs = {{"ab", "axb"}, {"a", "b"}};
  const ConfusionModel m = EstimateFromAligned(pairs, 0.5);
  // Alphabet {a, b, x}. Row a: a->a once, a->b once.
  EXPECT_NEAR(SubOf(m, U'a', U'a'), 1.5 / 3.5, 1e-12);
  EXPECT_NEAR(SubOf(m, U'a', U'x'), 0.5 / 3.5, 1e-12);
  // Row x never observed: pure smoothing.
  EXPECT_NEAR(SubOf(m, U'x', U'a'), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.p_insert(), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(m.p_delete(), 0.0);
  EXPECT_NEAR(m.insert_dist()[m.alphabet().IndexOf(U'x')], 1.5 / 2.5, 1e-12);
  ExpectRowsStochastic(m);
}

TEST(EstimateFromAlignedTest, Errors) {
  EXPECT_THROW(EstimateFromAligned({}, 0.1), Error);
  const std::vector<AlignedPair> pairs = {{"a", "a"}};
  EXPECT_THROW(EstimateFromAligned(pairs, -1.0), Error);
}

TEST(EstimateFromAlignedTest, RoundTripRecoversSubstitutionMatrix) {
  // OCR-like noise (diagonal near 0.86). At much heavier noise the aligner
  // finds cheaper match-preserving scripts and the diagonal is overestimated.
  std::mt19937_64 g(21);
  const Alphabet alphabet = LetterAlphabet(6);
  const ConfusionModel truth = RandomModel(alphabet, g, 30.0);
  const NoiseSampler sampler(truth);
  std::vector<AlignedPair> pairs;
  std::size_t chars = 0;
  for (std::uint64_t k = 0; chars < 100000; ++k) {
    const std::string gt = testing::RandomWord(alphabet, 8, g);
    CounterRng rng(7, k);
    pairs.push_back({gt, sampler.Corrupt(gt, CorruptionMode::kSubstitutionOnly, rng)});
    chars += 8;
  }
  const ConfusionModel estimated = EstimateFromAligned(pairs, 0.0);
  ASSERT_EQ(estimated.alphabet(), alphabet);
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    for (std::size_t j = 0; j < alphabet.size(); ++j) {
      EXPECT_NEAR(estimated.sub(i, j), truth.sub(i, j), 0.02)
          << "entry " << i << "," << j;
    }
  }
}

TEST(InterpolateTest, Examples) {
  const ConfusionModel m =
      ConfusionModel(LetterAlphabet(2), {0.8, 0.2, 0.2, 0.8}, 0.03, 0.04,
                     {0.5, 0.5});
  const ConfusionModel half = Interpolate(m, NoiseLevel(0.5));
  EXPECT_NEAR(half.sub(0, 0), 0.9, 1e-15);
  EXPECT_NEAR(half.sub(0, 1), 0.1, 1e-15);
  EXPECT_NEAR(half.p_insert(), 0.015, 1e-15);
  EXPECT_NEAR(half.p_delete(), 0.02, 1e-15);
  EXPECT_EQ(half.insert_dist(), m.insert_dist());

  const ConfusionModel zero = Interpolate(m, NoiseLevel(0.0));
  EXPECT_EQ(zero.sub_matrix(), IdentityNoise(m.alphabet()).sub_matrix());
  EXPECT_EQ(zero.p_insert(), 0.0);
  EXPECT_EQ(zero.p_delete(), 0.0);
  EXPECT_EQ(Interpolate(m, NoiseLevel(1.0)), m);
}

TEST(InterpolateTest, RandomModelsStayStochastic) {
  std::mt19937_64 g(31);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const ConfusionModel m = RandomModel(LetterAlphabet(size(g)), g, unit(g));
    const ConfusionModel out = Interpolate(m, NoiseLevel(unit(g)));
    ExpectRowsStochastic(out);
    EXPECT_EQ(Interpolate(m, NoiseLevel(1.0)), m);
    const ConfusionModel zero = Interpolate(m, NoiseLevel(0.0));
    EXPECT_EQ(zero.sub_matrix(), IdentityNoise(m.alphabet()).sub_matrix());
  }
}

TEST(ConstructorsTest, RowsStochasticForRandomConstructions) {
  std::mt19937_64 g(41);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  std::uniform_real_distribution<double> eps(0.0, 0.999);
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabet a = LetterAlphabet(size(g));
    ExpectRowsStochastic(UniformNoise(a, eps(g)));
    ExpectRowsStochastic(IdentityNoise(a));
    std::vector<AlignedPair> pairs;
    for (int k = 0; k < 5; ++k) {
      pairs.push_back({testing::RandomWord(a, 6, g), testing::RandomWord(a, 5, g)});
    }
    ExpectRowsStochastic(EstimateFromAligned(pairs, eps(g)));
    ExpectRowsStochastic(EstimateFromAligned(pairs, 0.0));
  }
}

TEST(WordLikelihoodTest, Examples) {
  const ConfusionModel m = UniformNoise(LetterAlphabet(2), 0.2);
  EXPECT_NEAR(WordLikelihood("ab", "ab", m), 0.64, 1e-15);
  EXPECT_NEAR(WordLikelihood("aa", "ab", m), 0.16, 1e-15);
  EXPECT_EQ(WordLikelihood("a", "ab", m), 0.0);
  EXPECT_EQ(WordLikelihood("az", "ab", m), 0.0);
  EXPECT_EQ(WordLikelihood("ab", "zb", m), 0.0);
  EXPECT_EQ(WordLikelihood("", "", m), 1.0);
}

TEST(WordLikelihoodTest, SumsToOneOverAllObservations) {
  std::mt19937_64 g(51);
  for (std::size_t a = 2; a <= 5; ++a) {
    const Alphabet alphabet = LetterAlphabet(a);
    const ConfusionModel m = RandomModel(alphabet, g);
    for (std::size_t n = 1; n <= 3; ++n) {
      const std::string w = testing::RandomWord(alphabet, n, g);
      double total = 0.0;
      std::vector<std::size_t> digits(n, 0);
      while (true) {
        std::u32string o;
        for (std::size_t d : digits) o.push_back(alphabet.at(d));
        total += WordLikelihood(EncodeUtf8(o), w, m);
        std::size_t p = 0;
        while (p < n && ++digits[p] == a) digits[p++] = 0;
        if (p == n) break;
      }
      EXPECT_NEAR(total, 1.0, 1e-6) << "|A|=" << a << " n=" << n;
    }
  }
}

TEST(CorruptTest, Examples) {
  const Alphabet abct({U'a', U'c', U't'});
  const ConfusionModel identity = IdentityNoise(abct);
  const ConfusionModel flip(LetterAlphabet(2), {0, 1, 1, 0}, 0, 0, {0.5, 0.5});
  const ConfusionModel drop(LetterAlphabet(2), {1, 0, 0, 1}, 0.0, 1.0,
                            {0.5, 0.5});
  for (std::uint64_t s = 0; s < 100; ++s) {
    CounterRng rng(3, s);
    EXPECT_EQ(CorruptWord("cat", identity, CorruptionMode::kFull, rng), "cat");
    EXPECT_EQ(CorruptWord("a", flip, CorruptionMode::kSubstitutionOnly, rng),
              "b");
    EXPECT_EQ(CorruptWord("ab", drop, CorruptionMode::kFull, rng), "");
    EXPECT_EQ(CorruptWord("ab", drop, CorruptionMode::kSubstitutionOnly, rng),
              "ab");
  }
}

TEST(CorruptTest, OutOfAlphabetPassesThrough) {
  const ConfusionModel flip(LetterAlphabet(2), {0, 1, 1, 0}, 0, 0, {0.5, 0.5});
  CounterRng rng(1, 1);
  EXPECT_EQ(CorruptWord("a-é.b", flip, CorruptionMode::kSubstitutionOnly, rng),
            "b-é.a");
}

TEST(CorruptTest, Reproducible) {
  std::mt19937_64 g(61);
  const Alphabet a = LetterAlphabet(6);
  ConfusionModel base = RandomModel(a, g, 0.5);
  const ConfusionModel m(a, base.sub_matrix(), 0.1, 0.2,
                         std::vector<double>(6, 1.0 / 6));
  const NoiseSampler sampler(m);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::string w = testing::RandomWord(a, 10, g);
    CounterRng r1(9, s), r2(9, s);
    EXPECT_EQ(sampler.Corrupt(w, CorruptionMode::kFull, r1),
              sampler.Corrupt(w, CorruptionMode::kFull, r2));
  }
}

TEST(CorruptTest, SubstitutionFrequenciesMatchRows) {
  std::mt19937_64 g(71);
  const Alphabet a = LetterAlphabet(4);
  const ConfusionModel m = RandomModel(a, g, 1.0);
  const NoiseSampler sampler(m);
  constexpr int kTrials = 100000;
  for (std::size_t from = 0; from < a.size(); ++from) {
    const std::string w = EncodeUtf8(std::u32string(1, a.at(from)));
    std::vector<int> counts(a.size(), 0);
    for (int t = 0; t < kTrials; ++t) {
      CounterRng rng(from, t);
      const std::string o =
          sampler.Corrupt(w, CorruptionMode::kSubstitutionOnly, rng);
      ++counts[a.IndexOf(DecodeUtf8(o)[0])];
    }
    for (std::size_t to = 0; to < a.size(); ++to) {
      const double p = m.sub(from, to);
      const double se = std::sqrt(p * (1 - p) / kTrials);
      EXPECT_NEAR(counts[to] / static_cast<double>(kTrials), p, 4 * se)
          << from << "->" << to;
    }
  }
}

TEST(CorruptTest, FullModeRates) {
  // Mean output length of an n-char word is n(1 - p_del) + (n' + 1) p_ins
  // where n' is the number of emitted characters.
  const Alphabet a = LetterAlphabet(3);
  const double p_ins = 0.03, p_del = 0.04;
  const ConfusionModel m(a, IdentityNoise(a).sub_matrix(), p_ins, p_del,
                         {0.2, 0.3, 0.5});
  const NoiseSampler sampler(m);
  constexpr int kTrials = 100000;
  constexpr int kLength = 10;
  const std::string w(kLength, 'a');
  double length_sum = 0.0;
  int inserted_b = 0, inserted_c = 0;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng(5, t);
    const std::string o = sampler.Corrupt(w, CorruptionMode::kFull, rng);
    length_sum += o.size();
    for (char c : o) {
      inserted_b += c == 'b';
      inserted_c += c == 'c';
    }
  }
  const double kept = kLength * (1 - p_del);
  const double expected = kept + (kept + 1) * p_ins;
  EXPECT_NEAR(length_sum / kTrials, expected, 0.01);
  // Inserted b:c ratio follows insert_dist.
  EXPECT_NEAR(static_cast<double>(inserted_b) / (inserted_b + inserted_c),
              0.3 / 0.8, 0.03);
}

TEST(AverageConfusionTest, WeightedAndUnweighted) {
  const ConfusionModel m(LetterAlphabet(2), {0.9, 0.1, 0.3, 0.7}, 0, 0,
                         {0.5, 0.5});
  const std::vector<char32_t> chars = {U'a', U'b', U'z'};
  ConfusionSummary s = AverageConfusion(m, chars);
  EXPECT_EQ(s.characters, 2u);
  EXPECT_NEAR(s.unweighted, 0.2, 1e-12);
  const std::vector<double> weights = {3, 1, 100};
  s = AverageConfusion(m, chars, weights);
  EXPECT_NEAR(s.weighted, (3 * 0.1 + 1 * 0.3) / 4, 1e-12);
}

TEST(ModelJsonTest, RoundTripAndValidation) {
  std::mt19937_64 g(81);
  const Alphabet a({U'a', U'é', U'1'});
  const ConfusionModel base = RandomModel(a, g);
  const ConfusionModel m(a, base.sub_matrix(), 0.03, 0.04, {0.2, 0.3, 0.5});
  const ConfusionModel back = ModelFromJson(ModelToJson(m));
  EXPECT_EQ(back.alphabet(), a);
  for (std::size_t k = 0; k < m.sub_matrix().size(); ++k) {
    EXPECT_NEAR(back.sub_matrix()[k], m.sub_matrix()[k], 1e-15);
  }
  EXPECT_EQ(back.p_insert(), 0.03);

  // Rows within 1e-6 of one are accepted and renormalized.
  const ConfusionModel loose = ModelFromJson(
      R"({"alphabet": ["a", "b"], "sub": [[0.9000005, 0.1], [0, 1]],
          "p_insert": 0, "p_delete": 0, "insert_dist": [0.5, 0.5]})");
  EXPECT_NEAR(loose.sub(0, 0) + loose.sub(0, 1), 1.0, 1e-12);
  EXPECT_THROW(ModelFromJson(
                   R"({"alphabet": ["a", "b"], "sub": [[0.95, 0.1], [0, 1]],
                       "p_insert": 0, "p_delete": 0, "insert_dist": [0.5, 0.5]})"),
               Error);
  EXPECT_THROW(ModelFromJson(
                   R"({"alphabet": ["ab"], "sub": [[1]], "p_insert": 0,
                       "p_delete": 0, "insert_dist": [1]})"),
               Error);
  EXPECT_THROW(ModelFromJson("{"), Error);
}

}  // namespace
}  // namespace ocrplex
