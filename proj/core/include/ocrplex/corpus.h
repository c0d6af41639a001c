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

#ifndef OCRPLEX_CORPUS_H_
#define OCRPLEX_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrplex/random.h"

namespace ocrplex {

struct Document {
  std::string id;
  std::string text;  // UTF-8
};

// Ordered, non-empty, whitespace-free tokens of one document or chunk.
using TokenSequence = std::vector<std::string>;

// Splits on Unicode whitespace, then peels punctuation and symbol characters
// off both ends of every piece as single-character tokens. Interior
// punctuation ("10,000.50", "e-mail", "12/03") stays attached.
TokenSequence Tokenize(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens);

// Word counts. Keys are ordered bytewise so iteration and export are
// deterministic.
class Vocabulary {
 public:
  using Map = std::map<std::string, std::uint64_t, std::less<>>;

  Vocabulary() = default;

  void Add(std::string_view word, std::uint64_t count = 1);

  std::uint64_t Count(std::string_view word) const;
  double Frequency(std::string_view word) const;
  bool Contains(std::string_view word) const;

  std::uint64_t total() const { return total_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  Map entries_;
  std::uint64_t total_ = 0;
};

// Documents are counted in id order.
Vocabulary BuildVocabulary(std::span<const Document> docs);

enum class Subset { kAll, kNumeric, kAlpha, kOther };

std::string_view SubsetName(Subset subset);
// Accepts "all", "numeric", "alpha", "other". Throws ocrplex::Error.
Subset ParseSubset(std::string_view name);

// kNumeric: at least one decimal digit. kAlpha: letters only. Everything else,
// punctuation included, is kOther. Never returns kAll.
Subset ClassifyWord(std::string_view word);

struct VocabPartition {
  std::set<std::string> numeric;
  std::set<std::string> alpha;
  std::set<std::string> other;
  // Token mass of each subset relative to the whole corpus.
  double p_numeric = 0.0;
  double p_alpha = 0.0;
  double p_other = 0.0;
};

VocabPartition PartitionVocabulary(const Vocabulary& vocab);

// Draws words proportionally to their counts within one subset. Sampling is
// exact integer arithmetic over cumulative counts, so a draw depends only on
// the generator state.
class WordSampler {
 public:
  // Throws ocrplex::Error if the subset holds no words.
  WordSampler(const Vocabulary& vocab, Subset subset);

  // Position of the drawn word in words().
  std::size_t SampleIndex(CounterRng& rng) const;
  const std::string& Sample(CounterRng& rng) const {
    return words_[SampleIndex(rng)];
  }

  const std::vector<std::string>& words() const { return words_; }
  std::uint64_t subset_total() const { return cumulative_.back(); }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> cumulative_;
};

std::string SampleWord(const Vocabulary& vocab, Subset subset,
                       CounterRng& rng);

// Greedy left-to-right packing of tokens into chunks whose space-joined length
// (in code points) is at most max_chars. A token longer than max_chars becomes
// a chunk of its own.
std::vector<TokenSequence> ChunkTokens(std::span<const std::string> tokens,
                                       std::size_t max_chars = 128);

// Tokenizes and chunks every document; chunks never span documents.
std::vector<TokenSequence> ChunkSequences(std::span<const Document> docs,
                                          std::size_t max_chars = 128);

// Reads a directory of UTF-8 .txt files (id = file name) or a JSONL file of
// {"id", "text"} objects. Result is sorted by id. Throws ocrplex::Error on
// unreadable paths, malformed JSON, duplicate ids or invalid UTF-8.
std::vector<Document> LoadCorpus(const std::filesystem::path& path);

// {"total": N, "entries": {word: count}} with keys in lexicographic order.
std::string VocabularyToJson(const Vocabulary& vocab);
Vocabulary VocabularyFromJson(std::string_view json);

}  // namespace ocrplex

#endif  // OCRPLEX_CORPUS_H_
