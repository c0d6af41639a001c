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

#include "ocrplex/metrics.h"

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ocrplex/corpus.h"
#include "ocrplex/error.h"

namespace ocrplex {
namespace {

// Memoized recursion on suffixes; shares no code with the two-row DP.
std::size_t ReferenceDistance(const TokenSequence& a, const TokenSequence& b) {
  std::vector<std::vector<int>> memo(a.size() + 1,
                                     std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> d = [&](std::size_t i,
                                                        std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({d(i + 1, j) + 1, d(i, j + 1) + 1,
                  d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    return m;
  };
  return static_cast<std::size_t>(d(0, 0));
}

TokenSequence RandomTokens(std::mt19937_64& g, std::size_t max_length) {
  static const std::string kPool[] = {"a", "b", "c", "the", "42"};
  std::uniform_int_distribution<std::size_t> length(0, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kPool) - 1);
  TokenSequence out(length(g));
  for (std::string& t : out) t = kPool[pick(g)];
  return out;
}

TEST(TokenEditDistanceTest, Examples) {
  EXPECT_EQ(TokenEditDistance(TokenSequence{"a", "b"}, TokenSequence{"a", "b"}), 0u);
  EXPECT_EQ(TokenEditDistance(TokenSequence{"a", "b", "c", "d"},
                              TokenSequence{"a", "x", "c", "d"}),
            1u);
  EXPECT_EQ(TokenEditDistance(TokenSequence{"a"}, TokenSequence{"a", "b", "c"}), 2u);
  EXPECT_EQ(TokenEditDistance(TokenSequence{}, TokenSequence{}), 0u);
  EXPECT_EQ(TokenEditDistance(TokenSequence{}, TokenSequence{"x", "y"}), 2u);
}

TEST(TokenEditDistanceTest, MatchesReferenceAndIsAMetric) {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const TokenSequence a = RandomTokens(g, 20);
    const TokenSequence b = RandomTokens(g, 20);
    const TokenSequence c = RandomTokens(g, 20);
    const std::size_t ab = TokenEditDistance(a, b);
    ASSERT_EQ(ab, ReferenceDistance(a, b));
    EXPECT_EQ(ab, TokenEditDistance(b, a));
    EXPECT_EQ(ab == 0, a == b);
    EXPECT_EQ(TokenEditDistance(a, a), 0u);
    EXPECT_LE(TokenEditDistance(a, c), ab + TokenEditDistance(b, c));
  }
}

TEST(WerTest, Examples) {
  const TokenSequence ref = {"a", "b", "c", "d"};
  EXPECT_EQ(Wer(ref, ref), 0.0);
  EXPECT_EQ(Wer(TokenSequence{"a", "x", "c", "d"}, ref), 0.25);
  EXPECT_EQ(Wer(TokenSequence{"a", "b", "c"}, TokenSequence{"a"}), 2.0);
  EXPECT_THROW(Wer(ref, TokenSequence{}), Error);
}

TEST(BaselineWerTest, Examples) {
  const TokenSequence ref = {"ab"};
  EXPECT_EQ(BaselineWer(ref, ref), 0.0);
  EXPECT_EQ(BaselineWer(TokenSequence{"ab", "x"}, ref), 1.0);
  EXPECT_EQ(BaselineWer(TokenSequence{"aa", "bc"}, TokenSequence{"aa", "bb"}),
            0.5);
  EXPECT_THROW(BaselineWer(ref, TokenSequence{}), Error);
}

TEST(EvaluateTest, MicroAndMacro) {
  const std::vector<EvalDocument> docs = {
      {"d1", {"a", "b", "c", "d"}, {"a", "x", "c", "y"}, {"a", "b", "c", "y"}},
      {"d2", {"e"}, {"e"}, {"f", "g"}},
  };
  const EvalReport report = Evaluate("toy", docs, "unigram");
  ASSERT_EQ(report.rows.size(), 2u);
  const EvalRow& base = report.rows[0];
  const EvalRow& sys = report.rows[1];
  EXPECT_EQ(base.system, "baseline");
  EXPECT_EQ(base.edit_ops, 2u);
  EXPECT_EQ(base.ref_tokens, 5u);
  EXPECT_DOUBLE_EQ(base.wer, 0.4);
  EXPECT_DOUBLE_EQ(base.macro_wer, (0.5 + 0.0) / 2);
  EXPECT_EQ(sys.system, "unigram");
  EXPECT_EQ(sys.edit_ops, 3u);
  EXPECT_DOUBLE_EQ(sys.wer, 0.6);
  EXPECT_DOUBLE_EQ(sys.macro_wer, (0.25 + 2.0) / 2);

  EXPECT_EQ(EvalReportCsv(report),
            "corpus,system,wer,ref_tokens,edit_ops\n"
            "toy,baseline,0.4,5,2\n"
            "toy,unigram,0.6,5,3\n");
  EXPECT_EQ(EvalReportJson(report, false).find("macro_wer"), std::string::npos);
  EXPECT_NE(EvalReportJson(report, true).find("macro_wer"), std::string::npos);
}

TEST(EvaluateTest, NoReferenceTokensIsAnError) {
  const std::vector<EvalDocument> docs = {{"d", {}, {"x"}, {}}};
  EXPECT_THROW(Evaluate("c", docs), Error);
}

TEST(EvaluateTest, ChunkingIsTransparent) {
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 200; ++trial) {
    const TokenSequence ref = RandomTokens(g, 60);
    if (ref.empty()) continue;
    const TokenSequence hyp = RandomTokens(g, 60);
    TokenSequence joined;
    for (const TokenSequence& chunk : ChunkTokens(ref, 1 + g() % 30)) {
      joined.insert(joined.end(), chunk.begin(), chunk.end());
    }
    EXPECT_EQ(Tokenize(JoinTokens(joined)), ref);
    EXPECT_EQ(Wer(hyp, Tokenize(JoinTokens(joined))), Wer(hyp, ref));
  }
}

}  // namespace
}  // namespace ocrplex
