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

#include "run_config.h"

#include <sstream>
#include <utility>

#include "ocrplex/error.h"

namespace ocrplex {
namespace {

constexpr std::string_view kTag = "ocrplex-config: ";

std::string ArgValue(const nlohmann::ordered_json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += ',';
      joined += ArgValue(item);
    }
    return joined;
  }
  return value.dump();
}

RunConfig ParseTagged(std::string_view line) {
  const std::size_t at = line.find(kTag);
  std::string_view body = line.substr(at + kTag.size());
  const std::size_t close = body.rfind("-->");
  if (close != std::string_view::npos) body = body.substr(0, close);
  try {
    return RunConfig::FromJson(nlohmann::json::parse(body));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed embedded config: ") + e.what());
  }
}

}  // namespace

RunConfig::RunConfig(std::string command) : command_(std::move(command)) {}

void RunConfig::Set(const std::string& flag, nlohmann::ordered_json value) {
  options_[flag] = std::move(value);
}

nlohmann::ordered_json RunConfig::ToJson() const {
  nlohmann::ordered_json out;
  out["tool"] = "ocrplex";
  out["version"] = OCRPLEX_VERSION;
  out["command"] = command_;
  out["options"] = options_;
  return out;
}

RunConfig RunConfig::FromJson(const nlohmann::json& json) {
  if (!json.is_object() || !json.contains("command") ||
      !json["command"].is_string() || !json.contains("options") ||
      !json["options"].is_object()) {
    throw Error("embedded config needs \"command\" and \"options\"");
  }
  RunConfig config(json["command"].get<std::string>());
  for (const auto& [flag, value] : json["options"].items()) {
    config.Set(flag, value);
  }
  return config;
}

std::string RunConfig::CsvComment() const {
  return "# " + std::string(kTag) + ToJson().dump() + "\n";
}

std::string RunConfig::XmlComment() const {
  // "--" may not appear inside an XML comment; it can only occur inside JSON
  // strings here, where an escaped hyphen is equivalent.
  std::string body = ToJson().dump();
  for (std::size_t at = body.find("--"); at != std::string::npos;
       at = body.find("--", at)) {
    body.replace(at + 1, 1, "\\u002d");
  }
  return "<!-- " + std::string(kTag) + body + " -->\n";
}

std::string RunConfig::JsonlHeader() const {
  nlohmann::ordered_json line;
  line["_config"] = ToJson();
  return line.dump() + "\n";
}

std::vector<std::string> RunConfig::ToArgs() const {
  std::vector<std::string> args;
  std::istringstream words(command_);
  for (std::string word; words >> word;) args.push_back(word);
  for (const auto& [flag, value] : options_.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + flag);
      continue;
    }
    if (value.is_null()) continue;
    args.push_back("--" + flag);
    args.push_back(ArgValue(value));
  }
  return args;
}

RunConfig ExtractRunConfig(std::string_view content) {
  std::size_t begin = 0;
  while (begin < content.size()) {
    std::size_t end = content.find('\n', begin);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(begin, end - begin);
    if (line.find(kTag) != std::string_view::npos &&
        (line.starts_with("# ") || line.starts_with("<!--"))) {
      return ParseTagged(line);
    }
    if (line.starts_with("{\"_config\"")) {
      try {
        return RunConfig::FromJson(nlohmann::json::parse(line)["_config"]);
      } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed embedded config: ") + e.what());
      }
    }
    begin = end + 1;
  }
  // Whole-document JSON reports carry a "config" member.
  try {
    const nlohmann::json root = nlohmann::json::parse(content);
    if (root.is_object() && root.contains("config")) {
      return RunConfig::FromJson(root["config"]);
    }
  } catch (const nlohmann::json::parse_error&) {
  }
  throw Error("no embedded ocrplex config found");
}

}  // namespace ocrplex
