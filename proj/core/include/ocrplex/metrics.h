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

#ifndef OCRPLEX_METRICS_H_
#define OCRPLEX_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ocrplex/corpus.h"

namespace ocrplex {

// Levenshtein distance over tokens with unit costs.
std::size_t TokenEditDistance(std::span<const std::string> a,
                              std::span<const std::string> b);

// Non-normalized word error rate: edit distance / |ref|. May exceed 1.
// Throws ocrplex::Error for an empty reference.
double Wer(std::span<const std::string> hyp, std::span<const std::string> ref);

// WER of the uncorrected noisy text.
double BaselineWer(std::span<const std::string> noisy,
                   std::span<const std::string> ref);

struct EvalDocument {
  std::string id;
  TokenSequence ref;
  TokenSequence noisy;
  TokenSequence hyp;
};

struct EvalRow {
  std::string system;
  double wer = 0.0;  // micro: edit_ops / ref_tokens
  std::size_t ref_tokens = 0;
  std::size_t edit_ops = 0;
  double macro_wer = 0.0;  // mean of per-document WER
};

struct EvalReport {
  std::string corpus;
  std::vector<EvalRow> rows;
};

// Rows "baseline" (noisy vs ref) and `system` (hyp vs ref). Documents with an
// empty reference are left out of the macro average.
EvalReport Evaluate(std::string corpus, std::span<const EvalDocument> docs,
                    std::string system = "system");

// corpus,system,wer,ref_tokens,edit_ops
std::string EvalReportCsv(const EvalReport& report);
std::string EvalReportJson(const EvalReport& report, bool include_macro);

}  // namespace ocrplex

#endif  // OCRPLEX_METRICS_H_
