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

// File formats for confusion models and aligned OCR pairs.

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ocrplex/error.h"
#include "ocrplex/noise.h"
#include "ocrplex/utf8.h"

namespace ocrplex {
namespace {

constexpr double kLoadTolerance = 1e-6;

using nlohmann::json;

std::vector<double> ReadDistribution(const json& value,
                                     const std::string& what) {
  if (!value.is_array()) throw Error(what + " must be an array");
  std::vector<double> out;
  out.reserve(value.size());
  double sum = 0.0;
  for (const json& entry : value) {
    if (!entry.is_number()) throw Error(what + " must hold numbers");
    out.push_back(entry.get<double>());
    sum += out.back();
  }
  if (std::abs(sum - 1.0) > kLoadTolerance) {
    throw Error(what + " sums to " + std::to_string(sum) +
                " (tolerance 1e-6)");
  }
  for (double& v : out) v /= sum;
  return out;
}

double ReadProbability(const json& root, const char* key) {
  if (!root.contains(key)) return 0.0;
  if (!root[key].is_number()) {
    throw Error(std::string(key) + " must be a number");
  }
  return root[key].get<double>();
}

}  // namespace

std::string ModelToJson(const ConfusionModel& model) {
  json alphabet = json::array();
  for (char32_t c : model.alphabet().chars()) {
    alphabet.push_back(EncodeUtf8(std::u32string(1, c)));
  }
  json sub = json::array();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto row = model.row(i);
    sub.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json out;
  out["alphabet"] = std::move(alphabet);
  out["sub"] = std::move(sub);
  out["p_insert"] = model.p_insert();
  out["p_delete"] = model.p_delete();
  out["insert_dist"] = model.insert_dist();
  return out.dump(1);
}

ConfusionModel ModelFromJson(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("alphabet") ||
      !root.contains("sub")) {
    throw Error("model JSON needs \"alphabet\" and \"sub\"");
  }
  if (!root["alphabet"].is_array()) {
    throw Error("\"alphabet\" must be an array of single characters");
  }
  std::vector<char32_t> chars;
  for (const json& entry : root["alphabet"]) {
    if (!entry.is_string()) throw Error("alphabet entries must be strings");
    const std::u32string c = DecodeUtf8(entry.get<std::string>());
    if (c.size() != 1) {
      throw Error("alphabet entry '" + entry.get<std::string>() +
                  "' is not a single character");
    }
    chars.push_back(c[0]);
  }
  const std::size_t n = chars.size();
  const json& rows = root["sub"];
  if (!rows.is_array() || rows.size() != n) {
    throw Error("\"sub\" must have one row per alphabet character");
  }
  std::vector<double> sub;
  sub.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row =
        ReadDistribution(rows[i], "substitution row " + std::to_string(i));
    if (row.size() != n) {
      throw Error("substitution row " + std::to_string(i) + " has " +
                  std::to_string(row.size()) + " entries, expected " +
                  std::to_string(n));
    }
    sub.insert(sub.end(), row.begin(), row.end());
  }
  std::vector<double> insert_dist =
      root.contains("insert_dist")
          ? ReadDistribution(root["insert_dist"], "insert_dist")
          : std::vector<double>(n, 1.0 / static_cast<double>(n));
  return ConfusionModel(Alphabet(std::move(chars)), std::move(sub),
                        ReadProbability(root, "p_insert"),
                        ReadProbability(root, "p_delete"),
                        std::move(insert_dist));
}

ConfusionModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ModelFromJson(buffer.str());
}

std::vector<AlignedPair> LoadAlignedPairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<AlignedPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(where + ": malformed JSON: " + e.what());
    }
    if (!record.is_object() || !record.contains("gt") ||
        !record.contains("ocr") || !record["gt"].is_string() ||
        !record["ocr"].is_string()) {
      throw Error(where + ": expected {\"gt\": string, \"ocr\": string}");
    }
    pairs.push_back(
        {record["gt"].get<std::string>(), record["ocr"].get<std::string>()});
  }
  return pairs;
}

}  // namespace ocrplex
