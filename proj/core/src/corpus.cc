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

#include "ocrplex/corpus.h"

#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "ocrplex/error.h"
#include "ocrplex/utf8.h"

namespace ocrplex {
namespace {

struct CodePointSpan {
  char32_t value;
  bool valid;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePointSpan> Scan(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::vector<CodePointSpan> out;
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t begin = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back({static_cast<char32_t>(c < 0 ? 0 : c), c >= 0,
                   static_cast<std::size_t>(begin),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

bool IsEdgePunct(const CodePointSpan& cp) {
  return cp.valid && IsPunctuationOrSymbol(cp.value);
}

void SplitPiece(std::string_view text, std::span<const CodePointSpan> piece,
                TokenSequence& out) {
  std::size_t first = 0;
  while (first < piece.size() && IsEdgePunct(piece[first])) ++first;
  std::size_t last = piece.size();
  while (last > first && IsEdgePunct(piece[last - 1])) --last;

  auto emit = [&](std::size_t from, std::size_t to) {
    out.emplace_back(text.substr(piece[from].begin,
                                 piece[to - 1].end - piece[from].begin));
  };
  for (std::size_t i = 0; i < first; ++i) emit(i, i + 1);
  if (first < last) emit(first, last);
  for (std::size_t i = last; i < piece.size(); ++i) emit(i, i + 1);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Document> LoadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(where + ": malformed JSON: " + e.what());
    }
    if (!record.is_object() || !record.contains("id") ||
        !record.contains("text") || !record["id"].is_string() ||
        !record["text"].is_string()) {
      throw Error(where + ": expected {\"id\": string, \"text\": string}");
    }
    docs.push_back({record["id"].get<std::string>(),
                    record["text"].get<std::string>()});
  }
  return docs;
}

}  // namespace

TokenSequence Tokenize(std::string_view text) {
  const std::vector<CodePointSpan> cps = Scan(text);
  TokenSequence tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (cps[i].valid && IsWhitespace(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !(cps[j].valid && IsWhitespace(cps[j].value))) {
      ++j;
    }
    SplitPiece(text, std::span(cps).subspan(i, j - i), tokens);
    i = j;
  }
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

void Vocabulary::Add(std::string_view word, std::uint64_t count) {
  if (count == 0) return;
  auto it = entries_.find(word);
  if (it == entries_.end()) {
    entries_.emplace(std::string(word), count);
  } else {
    it->second += count;
  }
  total_ += count;
}

std::uint64_t Vocabulary::Count(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? 0 : it->second;
}

double Vocabulary::Frequency(std::string_view word) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(Count(word)) / static_cast<double>(total_);
}

bool Vocabulary::Contains(std::string_view word) const {
  return entries_.find(word) != entries_.end();
}

Vocabulary BuildVocabulary(std::span<const Document> docs) {
  std::vector<const Document*> ordered;
  ordered.reserve(docs.size());
  for (const Document& doc : docs) ordered.push_back(&doc);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Document* a, const Document* b) {
                     return a->id < b->id;
                   });
  Vocabulary vocab;
  for (const Document* doc : ordered) {
    for (const std::string& token : Tokenize(doc->text)) vocab.Add(token);
  }
  return vocab;
}

std::string_view SubsetName(Subset subset) {
  switch (subset) {
    case Subset::kAll:
      return "all";
    case Subset::kNumeric:
      return "numeric";
    case Subset::kAlpha:
      return "alpha";
    case Subset::kOther:
      return "other";
  }
  return "unknown";
}

Subset ParseSubset(std::string_view name) {
  if (name == "all") return Subset::kAll;
  if (name == "numeric") return Subset::kNumeric;
  if (name == "alpha") return Subset::kAlpha;
  if (name == "other") return Subset::kOther;
  throw Error("unknown subset '" + std::string(name) +
              "' (expected all, numeric, alpha or other)");
}

Subset ClassifyWord(std::string_view word) {
  const std::vector<CodePointSpan> cps = Scan(word);
  if (cps.empty()) return Subset::kOther;
  bool all_letters = true;
  for (const CodePointSpan& cp : cps) {
    if (!cp.valid) {
      all_letters = false;
      continue;
    }
    if (IsDecimalDigit(cp.value)) return Subset::kNumeric;
    if (!IsLetter(cp.value)) all_letters = false;
  }
  return all_letters ? Subset::kAlpha : Subset::kOther;
}

VocabPartition PartitionVocabulary(const Vocabulary& vocab) {
  VocabPartition partition;
  std::uint64_t numeric_mass = 0;
  std::uint64_t alpha_mass = 0;
  std::uint64_t other_mass = 0;
  for (const auto& [word, count] : vocab.entries()) {
    switch (ClassifyWord(word)) {
      case Subset::kNumeric:
        partition.numeric.insert(word);
        numeric_mass += count;
        break;
      case Subset::kAlpha:
        partition.alpha.insert(word);
        alpha_mass += count;
        break;
      default:
        partition.other.insert(word);
        other_mass += count;
        break;
    }
  }
  if (vocab.total() > 0) {
    const auto total = static_cast<double>(vocab.total());
    partition.p_numeric = static_cast<double>(numeric_mass) / total;
    partition.p_alpha = static_cast<double>(alpha_mass) / total;
    partition.p_other = static_cast<double>(other_mass) / total;
  }
  return partition;
}

WordSampler::WordSampler(const Vocabulary& vocab, Subset subset) {
  std::uint64_t running = 0;
  for (const auto& [word, count] : vocab.entries()) {
    if (subset != Subset::kAll && ClassifyWord(word) != subset) continue;
    running += count;
    words_.push_back(word);
    cumulative_.push_back(running);
  }
  if (words_.empty()) {
    throw Error("subset '" + std::string(SubsetName(subset)) +
                "' of the vocabulary is empty");
  }
}

std::size_t WordSampler::SampleIndex(CounterRng& rng) const {
  const std::uint64_t r = rng.NextBelow(cumulative_.back());
  return static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), r) -
      cumulative_.begin());
}

std::string SampleWord(const Vocabulary& vocab, Subset subset,
                       CounterRng& rng) {
  return WordSampler(vocab, subset).Sample(rng);
}

std::vector<TokenSequence> ChunkTokens(std::span<const std::string> tokens,
                                       std::size_t max_chars) {
  std::vector<TokenSequence> chunks;
  TokenSequence current;
  std::size_t current_length = 0;
  for (const std::string& token : tokens) {
    const std::size_t length = CodePointCount(token);
    if (!current.empty() && current_length + 1 + length <= max_chars) {
      current.push_back(token);
      current_length += 1 + length;
      continue;
    }
    if (!current.empty()) chunks.push_back(std::move(current));
    current = {token};
    current_length = length;
  }
  if (!current.empty()) chunks.push_back(std::move(current));
  return chunks;
}

std::vector<TokenSequence> ChunkSequences(std::span<const Document> docs,
                                          std::size_t max_chars) {
  std::vector<TokenSequence> chunks;
  for (const Document& doc : docs) {
    const TokenSequence tokens = Tokenize(doc.text);
    for (TokenSequence& chunk : ChunkTokens(tokens, max_chars)) {
      chunks.push_back(std::move(chunk));
    }
  }
  return chunks;
}

std::vector<Document> LoadCorpus(const std::filesystem::path& path) {
  std::error_code ec;
  std::vector<Document> docs;
  if (std::filesystem::is_directory(path, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(path, ec)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".txt") {
        continue;
      }
      docs.push_back({entry.path().filename().string(), ReadFile(entry.path())});
    }
    if (ec) throw Error("cannot list " + path.string() + ": " + ec.message());
  } else if (std::filesystem::is_regular_file(path, ec)) {
    docs = LoadJsonl(path);
  } else {
    throw Error("corpus path " + path.string() +
                " is neither a directory nor a file");
  }

  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i > 0 && docs[i].id == docs[i - 1].id) {
      throw Error("duplicate document id '" + docs[i].id + "'");
    }
    if (!IsValidUtf8(docs[i].text)) {
      throw Error("document '" + docs[i].id + "' is not valid UTF-8");
    }
  }
  return docs;
}

std::string VocabularyToJson(const Vocabulary& vocab) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [word, count] : vocab.entries()) entries[word] = count;
  nlohmann::json out;
  out["total"] = vocab.total();
  out["entries"] = std::move(entries);
  return out.dump(2);
}

Vocabulary VocabularyFromJson(std::string_view json) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed vocabulary JSON: ") + e.what());
  }
  if (!parsed.is_object() || !parsed.contains("entries") ||
      !parsed["entries"].is_object()) {
    throw Error("vocabulary JSON needs an \"entries\" object");
  }
  Vocabulary vocab;
  for (const auto& [word, count] : parsed["entries"].items()) {
    if (!count.is_number_unsigned() || count.get<std::uint64_t>() == 0) {
      throw Error("count of '" + word + "' must be a positive integer");
    }
    vocab.Add(word, count.get<std::uint64_t>());
  }
  if (parsed.contains("total") &&
      parsed["total"].get<std::uint64_t>() != vocab.total()) {
    throw Error("vocabulary total does not match the sum of counts");
  }
  return vocab;
}

}  // namespace ocrplex
