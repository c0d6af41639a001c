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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocrplex/channel.h"
#include "ocrplex/complexity.h"
#include "ocrplex/corpus.h"
#include "ocrplex/error.h"
#include "ocrplex/metrics.h"
#include "ocrplex/noise.h"
#include "ocrplex/random.h"
#include "ocrplex/utf8.h"
#include "run_config.h"

namespace ocrplex {
namespace {

using nlohmann::ordered_json;

// Stream tag mixed into the seed of `corrupt` so its draws never coincide
// with those of a complexity run that shares the seed.
constexpr std::uint64_t kCorruptStreamTag = 0x636f7272757074;  // "corrupt"

std::string Number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string Label(const std::string& path) {
  std::filesystem::path p(path);
  while (!p.empty() && p.filename().empty()) p = p.parent_path();
  return p.stem().string();
}

std::uint64_t EntropySeed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

// Report destination: --out when given, otherwise the summary stream.
class Output {
 public:
  Output(std::string path, std::ostream& out)
      : path_(std::move(path)), out_(out) {}

  bool to_file() const { return !path_.empty(); }

  void Write(const std::string& content) const {
    if (!to_file()) {
      out_ << content;
      return;
    }
    std::ofstream file(path_, std::ios::binary);
    if (!file) throw Error("cannot write " + path_);
    file << content;
    if (!file) throw Error("failed writing " + path_);
  }

  // Human-readable lines are printed only when the report went to a file.
  std::ostream* summary() const { return to_file() ? &out_ : nullptr; }

 private:
  std::string path_;
  std::ostream& out_;
};

struct CommonFlags {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;

  std::uint64_t ResolveSeed() const {
    return seed_option != nullptr && seed_option->count() > 0 ? seed
                                                               : EntropySeed();
  }
};

void AddOut(CLI::App* app, CommonFlags& flags) {
  app->add_option("--out", flags.out, "Output file (default: stdout)");
}

void AddFormat(CLI::App* app, CommonFlags& flags) {
  app->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void AddSeed(CLI::App* app, CommonFlags& flags) {
  flags.seed_option = app->add_option(
      "--seed", flags.seed, "Master seed (default: fresh entropy, recorded)");
}

std::vector<Subset> ParseSubsets(const std::vector<std::string>& names) {
  std::vector<Subset> out;
  for (const std::string& name : names) out.push_back(ParseSubset(name));
  return out;
}

std::vector<std::string> SubsetNames(const std::vector<Subset>& subsets) {
  std::vector<std::string> out;
  for (Subset s : subsets) out.emplace_back(SubsetName(s));
  return out;
}

double ParseReal(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw CLI::ValidationError(what, "'" + text + "' is not a number");
  }
  return value;
}

// Accepts "A:B:STEP", a comma-separated list, or a single value. Grid points
// are rounded to 12 decimals so that 0.1:1.0:0.1 yields exactly k/10.
std::vector<double> ParseGammas(const std::string& grid) {
  std::vector<double> out;
  const auto round12 = [](double x) { return std::round(x * 1e12) / 1e12; };
  if (grid.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(grid);
    for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
    if (parts.size() != 3) {
      throw CLI::ValidationError("--gammas", "expected A:B:STEP");
    }
    const double from = ParseReal(parts[0], "--gammas");
    const double to = ParseReal(parts[1], "--gammas");
    const double step = ParseReal(parts[2], "--gammas");
    if (!(step > 0.0) || to < from) {
      throw CLI::ValidationError("--gammas", "need A <= B and STEP > 0");
    }
    for (std::int64_t k = 0;; ++k) {
      const double gamma = round12(from + static_cast<double>(k) * step);
      if (gamma > to + 1e-9) break;
      out.push_back(gamma);
    }
    return out;
  }
  std::stringstream in(grid);
  for (std::string part; std::getline(in, part, ',');) {
    out.push_back(ParseReal(part, "--gammas"));
  }
  if (out.empty()) throw CLI::ValidationError("--gammas", "no values");
  return out;
}

// ---------------------------------------------------------------- stats ---

struct StatsArgs {
  CommonFlags common;
  std::string corpus;
  std::string model;
};

int RunStats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  const std::vector<Document> docs = LoadCorpus(args.corpus);
  const Vocabulary vocab = BuildVocabulary(docs);
  const VocabPartition part = PartitionVocabulary(vocab);
  const std::string status = docs.empty() ? "empty" : "ok";
  if (docs.empty()) err << "warning: corpus " << args.corpus << " is empty\n";

  RunConfig config("stats");
  config.Set("corpus", args.corpus);
  if (!args.model.empty()) config.Set("model", args.model);
  config.Set("format", args.common.format);

  ordered_json row;
  row["corpus"] = Label(args.corpus);
  row["documents"] = docs.size();
  row["tokens"] = vocab.total();
  row["vocab"] = vocab.size();
  row["vocab_numeric"] = part.numeric.size();
  row["vocab_alpha"] = part.alpha.size();
  row["p_numeric"] = part.p_numeric;
  row["p_alpha"] = part.p_alpha;
  if (!args.model.empty()) {
    // Average confusion of the digits in the model alphabet, both uniformly
    // and weighted by digit occurrences in numeric words of the corpus.
    const ConfusionModel model = LoadModel(args.model);
    std::map<char32_t, double> digit_mass;
    for (char32_t c : model.alphabet().chars()) {
      if (IsDecimalDigit(c)) digit_mass[c] = 0.0;
    }
    for (const std::string& word : part.numeric) {
      for (char32_t c : DecodeUtf8(word)) {
        auto it = digit_mass.find(c);
        if (it != digit_mass.end()) {
          it->second += static_cast<double>(vocab.Count(word));
        }
      }
    }
    std::vector<char32_t> digits;
    std::vector<double> weights;
    for (const auto& [c, mass] : digit_mass) {
      digits.push_back(c);
      weights.push_back(mass);
    }
    const ConfusionSummary summary = AverageConfusion(model, digits, weights);
    row["digit_confusion_uniform"] = summary.unweighted;
    row["digit_confusion_weighted"] = summary.weighted;
  }
  row["status"] = status;

  std::string report;
  if (args.common.format == "json") {
    ordered_json root;
    root["config"] = config.ToJson();
    root["rows"] = ordered_json::array({row});
    report = root.dump(2) + "\n";
  } else {
    std::string header, values;
    for (const auto& [key, value] : row.items()) {
      if (!header.empty()) {
        header += ',';
        values += ',';
      }
      header += key;
      values += value.is_number_float() ? Number(value.get<double>())
                : value.is_string()     ? value.get<std::string>()
                                        : value.dump();
    }
    report = config.CsvComment() + header + "\n" + values + "\n";
  }
  const Output output(args.common.out, out);
  output.Write(report);
  if (std::ostream* s = output.summary()) {
    *s << "documents " << docs.size() << ", tokens " << vocab.total()
       << ", |V| " << vocab.size() << ", |V#| " << part.numeric.size()
       << ", |Va| " << part.alpha.size() << ", p(V#) "
       << Number(part.p_numeric) << ", p(Va) " << Number(part.p_alpha)
       << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- noise ---

struct NoiseArgs {
  CommonFlags common;
  std::string corpus;
  std::string alphabet;
  std::string pairs;
  double epsilon = 0.07;
  double smoothing = 0.1;
  // NaN unless given on the command line.
  double p_insert = std::nan("");
  double p_delete = std::nan("");
};

void WriteModel(const ConfusionModel& model, const RunConfig& config,
                const Output& output) {
  ordered_json root = ordered_json::parse(ModelToJson(model));
  root["config"] = config.ToJson();
  output.Write(root.dump(1) + "\n");
}

ConfusionModel WithIndels(const ConfusionModel& model, const NoiseArgs& args) {
  const bool set_insert = !std::isnan(args.p_insert);
  const bool set_delete = !std::isnan(args.p_delete);
  if (!set_insert && !set_delete) return model;
  return ConfusionModel(model.alphabet(), model.sub_matrix(),
                        set_insert ? args.p_insert : model.p_insert(),
                        set_delete ? args.p_delete : model.p_delete(),
                        model.insert_dist());
}

void RecordIndels(const NoiseArgs& args, RunConfig& config) {
  if (!std::isnan(args.p_insert)) config.Set("p-insert", args.p_insert);
  if (!std::isnan(args.p_delete)) config.Set("p-delete", args.p_delete);
}

int RunNoiseUniform(const NoiseArgs& args, std::ostream& out) {
  if (args.corpus.empty() == args.alphabet.empty()) {
    throw CLI::ValidationError("noise uniform",
                               "give exactly one of --corpus or --alphabet");
  }
  Alphabet alphabet;
  if (!args.alphabet.empty()) {
    std::u32string chars = DecodeUtf8(args.alphabet);
    std::sort(chars.begin(), chars.end());
    chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
    alphabet = Alphabet(std::vector<char32_t>(chars.begin(), chars.end()));
  } else {
    const Vocabulary vocab = BuildVocabulary(LoadCorpus(args.corpus));
    std::vector<std::string> words;
    for (const auto& [word, count] : vocab.entries()) words.push_back(word);
    alphabet = Alphabet::FromText(words);
  }
  const ConfusionModel model =
      WithIndels(UniformNoise(alphabet, args.epsilon), args);

  RunConfig config("noise uniform");
  if (!args.corpus.empty()) config.Set("corpus", args.corpus);
  if (!args.alphabet.empty()) config.Set("alphabet", args.alphabet);
  config.Set("epsilon", args.epsilon);
  RecordIndels(args, config);
  const Output output(args.common.out, out);
  WriteModel(model, config, output);
  if (std::ostream* s = output.summary()) {
    *s << "uniform model over " << alphabet.size()
       << " characters, diagonal " << Number(1.0 - args.epsilon) << "\n";
  }
  return kExitOk;
}

int RunNoiseEstimate(const NoiseArgs& args, std::ostream& out) {
  const std::vector<AlignedPair> pairs = LoadAlignedPairs(args.pairs);
  const ConfusionModel model =
      WithIndels(EstimateFromAligned(pairs, args.smoothing), args);

  RunConfig config("noise estimate");
  config.Set("pairs", args.pairs);
  config.Set("smoothing", args.smoothing);
  RecordIndels(args, config);
  const Output output(args.common.out, out);
  WriteModel(model, config, output);
  if (std::ostream* s = output.summary()) {
    const auto& chars = model.alphabet().chars();
    const ConfusionSummary summary = AverageConfusion(model, chars);
    *s << "estimated model over " << model.size() << " characters from "
       << pairs.size() << " pairs: mean confusion "
       << Number(summary.unweighted) << ", p_insert "
       << Number(model.p_insert()) << ", p_delete "
       << Number(model.p_delete()) << "\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------- complexity ---

struct ComplexityArgs {
  CommonFlags common;
  std::string corpus;
  std::string model;
  std::string gammas = "0.1:1.0:0.1";
  std::uint64_t samples = 1'000'000;
  std::vector<std::string> subsets;
  std::size_t shards = 0;
  std::size_t threads = 0;
  std::string svg;
};

int RunComplexity(const ComplexityArgs& args, std::ostream& out,
                  std::ostream& err) {
  const std::vector<double> gammas = ParseGammas(args.gammas);
  const Vocabulary vocab = BuildVocabulary(LoadCorpus(args.corpus));
  const ConfusionModel model = LoadModel(args.model);

  std::vector<Subset> subsets;
  if (args.subsets.empty()) {
    // Default selection: skip subsets the corpus does not have.
    const VocabPartition part = PartitionVocabulary(vocab);
    subsets.push_back(Subset::kAll);
    for (const auto& [subset, words] :
         {std::pair{Subset::kNumeric, &part.numeric},
          std::pair{Subset::kAlpha, &part.alpha}}) {
      if (words->empty()) {
        err << "warning: corpus has no " << SubsetName(subset)
            << " words; skipping that subset\n";
      } else {
        subsets.push_back(subset);
      }
    }
  } else {
    subsets = ParseSubsets(args.subsets);
  }

  EstimateOptions options;
  options.n_samples = args.samples;
  options.seed = args.common.ResolveSeed();
  options.threads = args.threads;
  options.shards = args.shards > 0
                       ? args.shards
                       : std::max(1u, std::thread::hardware_concurrency());

  RunConfig config("complexity");
  config.Set("corpus", args.corpus);
  config.Set("model", args.model);
  config.Set("gammas", args.gammas);
  config.Set("samples", args.samples);
  config.Set("subset", SubsetNames(subsets));
  config.Set("seed", options.seed);
  config.Set("format", args.common.format);

  const auto start = std::chrono::steady_clock::now();
  SweepReport report = GammaSweep(vocab, model, gammas, subsets, options);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  report.corpus = Label(args.corpus);
  report.model = Label(args.model);

  const Output output(args.common.out, out);
  if (args.common.format == "json") {
    ordered_json root = ordered_json::parse(SweepReportJson(report));
    root["config"] = config.ToJson();
    output.Write(root.dump(2) + "\n");
  } else {
    output.Write(config.CsvComment() + SweepReportCsv(report));
  }
  if (!args.svg.empty()) {
    Output(args.svg, out).Write(config.XmlComment() + SweepReportSvg(report));
  }
  if (std::ostream* s = output.summary()) {
    *s << "seed " << options.seed << ", " << args.samples
       << " samples per row, " << report.rows.size() << " rows in "
       << Number(seconds) << " s\n";
    for (const ComplexityEstimate& row : report.rows) {
      *s << "  " << SubsetName(row.subset) << "  gamma " << Number(row.gamma)
         << "  theta " << Number(row.theta) << " +- "
         << Number(row.std_error) << "\n";
    }
  }
  return kExitOk;
}

// -------------------------------------------------------------- corrupt ---

struct CorruptArgs {
  CommonFlags common;
  std::string corpus;
  std::string model;
  double gamma = 1.0;
  std::string mode = "full";
  std::size_t max_chars = 128;
};

int RunCorrupt(const CorruptArgs& args, std::ostream& out) {
  const std::vector<Document> docs = LoadCorpus(args.corpus);
  const ConfusionModel model =
      Interpolate(LoadModel(args.model), NoiseLevel(args.gamma));
  const CorruptionMode mode = ParseCorruptionMode(args.mode);
  const NoiseSampler sampler(model);
  const std::uint64_t seed = args.common.ResolveSeed();
  const std::uint64_t stream_seed = DeriveSeed(seed, kCorruptStreamTag);

  RunConfig config("corrupt");
  config.Set("corpus", args.corpus);
  config.Set("model", args.model);
  config.Set("gamma", args.gamma);
  config.Set("mode", std::string(CorruptionModeName(mode)));
  config.Set("max-chars", args.max_chars);
  config.Set("seed", seed);

  std::string report = config.JsonlHeader();
  std::uint64_t ordinal = 0;
  std::size_t ref_tokens = 0, changed_tokens = 0;
  for (const Document& doc : docs) {
    const std::vector<TokenSequence> chunks =
        ChunkTokens(Tokenize(doc.text), args.max_chars);
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      CounterRng rng(stream_seed, ordinal++);
      TokenSequence noisy;
      for (const std::string& token : chunks[c]) {
        std::string corrupted = sampler.Corrupt(token, mode, rng);
        changed_tokens += corrupted != token;
        if (!corrupted.empty()) noisy.push_back(std::move(corrupted));
      }
      ref_tokens += chunks[c].size();
      ordered_json line;
      line["id"] = doc.id;
      line["chunk_index"] = c;
      line["ref"] = JoinTokens(chunks[c]);
      line["noisy"] = JoinTokens(noisy);
      report += line.dump() + "\n";
    }
  }
  const Output output(args.common.out, out);
  output.Write(report);
  if (std::ostream* s = output.summary()) {
    *s << "seed " << seed << ": " << ordinal << " chunks, " << changed_tokens
       << " of " << ref_tokens << " tokens changed\n";
  }
  return kExitOk;
}

// ------------------------------------------------- corruption records ----

struct ChunkKey {
  std::string id;
  std::uint64_t chunk_index;
  auto operator<=>(const ChunkKey&) const = default;
};

// Reads a JSONL file written by `corrupt` or `denoise`, skipping the config
// header. Each record must carry "id", "chunk_index" and every field named in
// `fields`.
std::map<ChunkKey, std::map<std::string, std::string>> ReadChunkRecords(
    const std::string& path, const std::vector<std::string>& fields,
    std::optional<RunConfig>* config = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::map<ChunkKey, std::map<std::string, std::string>> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(where + ": malformed JSON: " + e.what());
    }
    if (record.is_object() && record.contains("_config")) {
      if (config != nullptr) *config = RunConfig::FromJson(record["_config"]);
      continue;
    }
    if (!record.is_object() || !record.contains("id") ||
        !record["id"].is_string() || !record.contains("chunk_index") ||
        !record["chunk_index"].is_number_unsigned()) {
      throw Error(where + ": expected \"id\" and \"chunk_index\"");
    }
    std::map<std::string, std::string> values;
    for (const std::string& field : fields) {
      if (!record.contains(field) || !record[field].is_string()) {
        throw Error(where + ": missing string field \"" + field + "\"");
      }
      values[field] = record[field].get<std::string>();
    }
    ChunkKey key{record["id"].get<std::string>(),
                 record["chunk_index"].get<std::uint64_t>()};
    if (!records.emplace(std::move(key), std::move(values)).second) {
      throw Error(where + ": duplicate (id, chunk_index)");
    }
  }
  return records;
}

// -------------------------------------------------------------- denoise ---

struct DenoiseArgs {
  CommonFlags common;
  std::string noisy;
  std::string train;
  std::string model;
  double gamma = 1.0;
  std::string mode = "unigram";
  std::size_t beam_width = 8;
  double backoff = BigramPrior::kDefaultBackoff;
};

int RunDenoise(const DenoiseArgs& args, std::ostream& out) {
  const std::vector<Document> train = LoadCorpus(args.train);
  std::vector<TokenSequence> sequences;
  sequences.reserve(train.size());
  for (const Document& doc : train) sequences.push_back(Tokenize(doc.text));
  const BigramPrior prior = BigramPrior::FromSequences(sequences, args.backoff);
  const ConfusionModel model =
      Interpolate(LoadModel(args.model), NoiseLevel(args.gamma));
  const UnigramDecoder decoder(BuildCandidateIndex(prior.unigram()), model);
  const bool beam = args.mode == "beam";

  RunConfig config("denoise");
  config.Set("noisy", args.noisy);
  config.Set("train", args.train);
  config.Set("model", args.model);
  config.Set("gamma", args.gamma);
  config.Set("mode", args.mode);
  if (beam) {
    config.Set("beam-width", args.beam_width);
    config.Set("backoff", args.backoff);
  }

  std::string report = config.JsonlHeader();
  std::size_t tokens = 0, changed = 0;
  for (const auto& [key, values] : ReadChunkRecords(args.noisy, {"noisy"})) {
    const TokenSequence observed = Tokenize(values.at("noisy"));
    const TokenSequence hyp =
        beam ? DecodeBeam(observed, decoder, prior, {args.beam_width}).tokens
             : DenoiseSequenceUnigram(observed, decoder);
    tokens += observed.size();
    for (std::size_t i = 0; i < hyp.size(); ++i) changed += hyp[i] != observed[i];
    ordered_json line;
    line["id"] = key.id;
    line["chunk_index"] = key.chunk_index;
    line["hyp"] = JoinTokens(hyp);
    report += line.dump() + "\n";
  }
  const Output output(args.common.out, out);
  output.Write(report);
  if (std::ostream* s = output.summary()) {
    *s << args.mode << " denoiser over |V| " << prior.unigram().size() << ": "
       << changed << " of " << tokens << " tokens changed\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------- evaluate ---

struct EvaluateArgs {
  CommonFlags common;
  std::string hyp;
  std::string noisy;
  std::string system;
  bool macro = false;
};

int RunEvaluate(const EvaluateArgs& args, std::ostream& out) {
  std::optional<RunConfig> hyp_config;
  const auto hyps = ReadChunkRecords(args.hyp, {"hyp"}, &hyp_config);
  const auto chunks = ReadChunkRecords(args.noisy, {"ref", "noisy"});
  for (const auto& [key, values] : hyps) {
    if (!chunks.contains(key)) {
      throw Error("hypothesis chunk (" + key.id + ", " +
                  std::to_string(key.chunk_index) +
                  ") has no corruption record");
    }
  }

  // Chunks are concatenated back into documents before scoring.
  std::vector<EvalDocument> docs;
  std::map<std::string, std::string> ref, noisy, hyp;
  std::vector<std::string> order;
  for (const auto& [key, values] : chunks) {
    auto it = hyps.find(key);
    if (it == hyps.end()) {
      throw Error("corruption chunk (" + key.id + ", " +
                  std::to_string(key.chunk_index) + ") has no hypothesis");
    }
    if (order.empty() || order.back() != key.id) order.push_back(key.id);
    for (auto [target, text] :
         {std::pair{&ref, &values.at("ref")},
          std::pair{&noisy, &values.at("noisy")},
          std::pair{&hyp, &it->second.at("hyp")}}) {
      std::string& joined = (*target)[key.id];
      if (!joined.empty()) joined += ' ';
      joined += *text;
    }
  }
  for (const std::string& id : order) {
    docs.push_back(
        {id, Tokenize(ref[id]), Tokenize(noisy[id]), Tokenize(hyp[id])});
  }

  std::string system = args.system;
  if (system.empty()) {
    system = hyp_config && hyp_config->options().contains("mode")
                 ? hyp_config->options()["mode"].get<std::string>()
                 : "system";
  }
  const EvalReport report = Evaluate(Label(args.noisy), docs, system);

  RunConfig config("evaluate");
  config.Set("hyp", args.hyp);
  config.Set("noisy", args.noisy);
  if (!args.system.empty()) config.Set("system", args.system);
  config.Set("macro", args.macro);
  config.Set("format", args.common.format);

  const Output output(args.common.out, out);
  if (args.common.format == "json") {
    ordered_json root =
        ordered_json::parse(EvalReportJson(report, args.macro));
    root["config"] = config.ToJson();
    output.Write(root.dump(2) + "\n");
  } else {
    output.Write(config.CsvComment() + EvalReportCsv(report));
  }
  if (std::ostream* s = output.summary()) {
    for (const EvalRow& row : report.rows) {
      *s << row.system << ": WER " << Number(row.wer) << " (" << row.edit_ops
         << " edits / " << row.ref_tokens << " tokens)";
      if (args.macro) *s << ", macro WER " << Number(row.macro_wer);
      *s << "\n";
    }
  }
  return kExitOk;
}

// --------------------------------------------------------------- parser ---

struct Invocation {
  StatsArgs stats;
  NoiseArgs noise;
  ComplexityArgs complexity;
  CorruptArgs corrupt;
  DenoiseArgs denoise;
  EvaluateArgs evaluate;
  std::string rerun_file;
  std::string rerun_out;
};

void Configure(CLI::App& app, Invocation& inv) {
  app.require_subcommand(1);
  app.set_version_flag("--version", OCRPLEX_VERSION);

  CLI::App* stats = app.add_subcommand("stats", "Corpus vocabulary statistics");
  stats->add_option("--corpus", inv.stats.corpus, "Corpus directory or JSONL")
      ->required();
  stats->add_option("--model", inv.stats.model,
                    "Model for the digit-confusion diagnostic");
  AddOut(stats, inv.stats.common);
  AddFormat(stats, inv.stats.common);

  CLI::App* noise = app.add_subcommand("noise", "Build a noise model");
  noise->require_subcommand(1);
  CLI::App* uniform =
      noise->add_subcommand("uniform", "Uniform substitution noise");
  uniform->add_option("--corpus", inv.noise.corpus,
                      "Take the alphabet from this corpus");
  uniform->add_option("--alphabet", inv.noise.alphabet,
                      "Explicit alphabet characters");
  uniform->add_option("--epsilon", inv.noise.epsilon, "Substitution mass")
      ->check(CLI::Range(0.0, 1.0));
  CLI::App* estimate =
      noise->add_subcommand("estimate", "Estimate from aligned pairs");
  estimate->add_option("--pairs", inv.noise.pairs, "JSONL of {gt, ocr}")
      ->required();
  estimate->add_option("--smoothing", inv.noise.smoothing,
                       "Additive smoothing")
      ->check(CLI::NonNegativeNumber);
  for (CLI::App* sub : {uniform, estimate}) {
    sub->add_option("--p-insert", inv.noise.p_insert,
                    "Override the insertion probability")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--p-delete", inv.noise.p_delete,
                    "Override the deletion probability")
        ->check(CLI::Range(0.0, 1.0));
    AddOut(sub, inv.noise.common);
  }

  CLI::App* complexity =
      app.add_subcommand("complexity", "Estimate denoising complexity");
  ComplexityArgs& c = inv.complexity;
  complexity->add_option("--corpus", c.corpus, "Corpus")->required();
  complexity->add_option("--model", c.model, "Base noise model")->required();
  complexity->add_option("--gammas", c.gammas, "A:B:STEP, list, or value");
  complexity->add_option("--samples", c.samples, "Samples per row")
      ->check(CLI::PositiveNumber);
  complexity->add_option("--subset", c.subsets, "all|numeric|alpha|other")
      ->delimiter(',')
      ->check(CLI::IsMember({"all", "numeric", "alpha", "other"}));
  complexity->add_option("--shards", c.shards,
                         "Work shards (default: hardware threads)");
  complexity->add_option("--threads", c.threads, "Worker threads (0: auto)");
  complexity->add_option("--svg", c.svg, "Also write an SVG chart");
  AddSeed(complexity, c.common);
  AddOut(complexity, c.common);
  AddFormat(complexity, c.common);

  CLI::App* corrupt = app.add_subcommand("corrupt", "Inject noise");
  corrupt->add_option("--corpus", inv.corrupt.corpus, "Corpus")->required();
  corrupt->add_option("--model", inv.corrupt.model, "Noise model")->required();
  corrupt->add_option("--gamma", inv.corrupt.gamma, "Noise level")
      ->check(CLI::Range(0.0, 1.0));
  corrupt->add_option("--mode", inv.corrupt.mode, "substitution|full")
      ->check(CLI::IsMember({"substitution", "full"}));
  corrupt->add_option("--max-chars", inv.corrupt.max_chars, "Chunk size")
      ->check(CLI::PositiveNumber);
  AddSeed(corrupt, inv.corrupt.common);
  AddOut(corrupt, inv.corrupt.common);

  CLI::App* denoise = app.add_subcommand("denoise", "Denoise a noisy corpus");
  DenoiseArgs& d = inv.denoise;
  denoise->add_option("--noisy", d.noisy, "Output of corrupt")->required();
  denoise->add_option("--train", d.train, "Clean corpus for the prior")
      ->required();
  denoise->add_option("--model", d.model, "Noise model")->required();
  denoise->add_option("--gamma", d.gamma, "Noise level of the model")
      ->check(CLI::Range(0.0, 1.0));
  denoise->add_option("--mode", d.mode, "unigram|beam")
      ->check(CLI::IsMember({"unigram", "beam"}));
  denoise->add_option("--beam-width", d.beam_width, "Beam width")
      ->check(CLI::PositiveNumber);
  denoise->add_option("--backoff", d.backoff, "Bigram interpolation weight")
      ->check(CLI::Range(0.0, 0.999999));
  AddOut(denoise, d.common);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Word error rates");
  evaluate->add_option("--hyp", inv.evaluate.hyp, "Output of denoise")
      ->required();
  evaluate->add_option("--noisy", inv.evaluate.noisy, "Output of corrupt")
      ->required();
  evaluate->add_option("--system", inv.evaluate.system, "System label");
  evaluate->add_flag("--macro", inv.evaluate.macro,
                     "Also report per-document macro WER");
  AddOut(evaluate, inv.evaluate.common);
  AddFormat(evaluate, inv.evaluate.common);

  CLI::App* rerun =
      app.add_subcommand("rerun", "Re-run the config embedded in a file");
  rerun->add_option("file", inv.rerun_file, "File written by ocrplex")
      ->required();
  rerun->add_option("--out", inv.rerun_out, "Output file (default: stdout)");
}

int Dispatch(const CLI::App& app, Invocation& inv, std::ostream& out,
             std::ostream& err) {
  if (app.got_subcommand("stats")) return RunStats(inv.stats, out, err);
  if (app.got_subcommand("noise")) {
    const CLI::App* noise = app.get_subcommand("noise");
    return noise->got_subcommand("uniform") ? RunNoiseUniform(inv.noise, out)
                                            : RunNoiseEstimate(inv.noise, out);
  }
  if (app.got_subcommand("complexity")) {
    return RunComplexity(inv.complexity, out, err);
  }
  if (app.got_subcommand("corrupt")) return RunCorrupt(inv.corrupt, out);
  if (app.got_subcommand("denoise")) return RunDenoise(inv.denoise, out);
  if (app.got_subcommand("evaluate")) return RunEvaluate(inv.evaluate, out);
  // rerun
  std::vector<std::string> args =
      ExtractRunConfig(ReadText(inv.rerun_file)).ToArgs();
  if (!args.empty() && args.front() == "rerun") {
    throw Error("refusing to rerun a rerun");
  }
  if (!inv.rerun_out.empty()) {
    args.push_back("--out");
    args.push_back(inv.rerun_out);
  }
  return RunCli(args, out, err);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Denoising-complexity toolkit for OCR corpora", "ocrplex"};
  Invocation inv;
  Configure(app, inv);
  try {
    // CLI11 consumes a vector in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return Dispatch(app, inv, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace ocrplex
