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
#include <numeric>
#include <utility>

#include "ocrplex/error.h"

namespace ocrplex {

std::size_t TokenEditDistance(std::span<const std::string> a,
                              std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> previous(b.size() + 1);
  std::vector<std::size_t> current(b.size() + 1);
  std::iota(previous.begin(), previous.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    current[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute =
          previous[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      current[j] = std::min({substitute, previous[j] + 1, current[j - 1] + 1});
    }
    std::swap(previous, current);
  }
  return previous[b.size()];
}

double Wer(std::span<const std::string> hyp,
           std::span<const std::string> ref) {
  if (ref.empty()) throw Error("WER is undefined for an empty reference");
  return static_cast<double>(TokenEditDistance(hyp, ref)) /
         static_cast<double>(ref.size());
}

double BaselineWer(std::span<const std::string> noisy,
                   std::span<const std::string> ref) {
  return Wer(noisy, ref);
}

EvalReport Evaluate(std::string corpus, std::span<const EvalDocument> docs,
                    std::string system) {
  EvalRow baseline{"baseline"};
  EvalRow denoiser{std::move(system)};
  std::size_t scored_documents = 0;
  for (const EvalDocument& doc : docs) {
    const std::size_t noisy_ops = TokenEditDistance(doc.noisy, doc.ref);
    const std::size_t hyp_ops = TokenEditDistance(doc.hyp, doc.ref);
    baseline.edit_ops += noisy_ops;
    denoiser.edit_ops += hyp_ops;
    baseline.ref_tokens += doc.ref.size();
    denoiser.ref_tokens += doc.ref.size();
    if (!doc.ref.empty()) {
      const auto tokens = static_cast<double>(doc.ref.size());
      baseline.macro_wer += static_cast<double>(noisy_ops) / tokens;
      denoiser.macro_wer += static_cast<double>(hyp_ops) / tokens;
      ++scored_documents;
    }
  }
  if (baseline.ref_tokens == 0) {
    throw Error("evaluation needs at least one reference token");
  }
  for (EvalRow* row : {&baseline, &denoiser}) {
    row->wer = static_cast<double>(row->edit_ops) /
               static_cast<double>(row->ref_tokens);
    row->macro_wer /= static_cast<double>(scored_documents);
  }
  return {std::move(corpus), {std::move(baseline), std::move(denoiser)}};
}

}  // namespace ocrplex
