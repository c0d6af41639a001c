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

// The resolved configuration of a command, embedded in every file the tool
// writes so that the file can be regenerated with `ocrplex rerun`.

#ifndef OCRPLEX_TOOLS_RUN_CONFIG_H_
#define OCRPLEX_TOOLS_RUN_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ocrplex {

class RunConfig {
 public:
  // `command` may hold a subcommand, as in "noise uniform".
  explicit RunConfig(std::string command);

  // Options are stored under their flag names without the leading dashes.
  // Output paths are deliberately not recorded.
  void Set(const std::string& flag, nlohmann::ordered_json value);

  const std::string& command() const { return command_; }
  const nlohmann::ordered_json& options() const { return options_; }

  nlohmann::ordered_json ToJson() const;
  static RunConfig FromJson(const nlohmann::json& json);

  // "# ocrplex-config: {...}" line for CSV output.
  std::string CsvComment() const;
  // "<!-- ocrplex-config: {...} -->" line for SVG output.
  std::string XmlComment() const;
  // {"_config": {...}} header line for JSONL output.
  std::string JsonlHeader() const;

  // Command-line arguments that reproduce the run, without --out.
  std::vector<std::string> ToArgs() const;

 private:
  std::string command_;
  nlohmann::ordered_json options_ = nlohmann::ordered_json::object();
};

// Finds the embedded configuration in any file written by the tool. Throws
// ocrplex::Error if there is none.
RunConfig ExtractRunConfig(std::string_view content);

}  // namespace ocrplex

#endif  // OCRPLEX_TOOLS_RUN_CONFIG_H_
