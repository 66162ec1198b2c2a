// Copyright 2026 The groupcf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "groupcf/error.hpp"

namespace groupcf::internal {

ordered_json SpaceToJson(const FeatureSpace& space) {
  ordered_json features = ordered_json::array();
  for (const auto& f : space.features()) {
    ordered_json jf;
    jf["name"] = f.name;
    jf["kind"] = f.is_numeric() ? "numeric" : "categorical";
    if (f.is_numeric()) {
      jf["min"] = f.alpha;
      jf["max"] = f.beta;
    } else {
      jf["categories"] = f.categories;
    }
    jf["actionable"] = f.actionable;
    features.push_back(std::move(jf));
  }
  ordered_json j;
  j["features"] = std::move(features);
  j["labels"] = space.labels();
  return j;
}

FeatureSpace SpaceFromJson(const ordered_json& j) {
  try {
    std::vector<FeatureDescriptor> features;
    for (const auto& jf : j.at("features")) {
      const std::string kind = jf.at("kind").get<std::string>();
      const bool actionable = GetOr(jf, "actionable", true);
      if (kind == "numeric") {
        features.push_back(FeatureDescriptor::Numeric(
            jf.at("name").get<std::string>(), jf.at("min").get<double>(),
            jf.at("max").get<double>(), actionable));
      } else if (kind == "categorical") {
        features.push_back(FeatureDescriptor::Categorical(
            jf.at("name").get<std::string>(),
            jf.at("categories").get<std::vector<std::string>>(), actionable));
      } else {
        Fail(ErrorCode::kParse, "unknown feature kind '" + kind + "'");
      }
    }
    return FeatureSpace(std::move(features),
                        j.at("labels").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed feature space: ") + e.what());
  }
}

ordered_json DeltaToJson(const FeatureSpace& space, const Delta& d) {
  ordered_json j = ordered_json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    switch (d[i].kind) {
      case ChangeKind::kNone: j.push_back(nullptr); break;
      case ChangeKind::kOffset: j.push_back(d[i].offset); break;
      case ChangeKind::kSet:
        j.push_back(space.feature(i).categories.at(d[i].category));
        break;
    }
  }
  return j;
}

Delta DeltaFromJson(const FeatureSpace& space, const ordered_json& j) {
  if (!j.is_array() || j.size() != space.size()) {
    Fail(ErrorCode::kParse, "delta must be an array with one entry per feature");
  }
  Delta d = Delta::NoChange(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& e = j[i];
    if (e.is_null()) continue;
    if (e.is_number()) {
      d[i] = Change::Offset(e.get<double>());
    } else if (e.is_string()) {
      auto idx = space.feature(i).CategoryIndex(e.get<std::string>());
      if (!idx) {
        Fail(ErrorCode::kParse, "delta: unknown category '" +
                                    e.get<std::string>() + "' for feature '" +
                                    space.feature(i).name + "'");
      }
      d[i] = Change::Set(*idx);
    } else {
      Fail(ErrorCode::kParse, "delta entry must be null, number or string");
    }
  }
  ValidateDelta(space, d);
  return d;
}

ordered_json InstanceToJson(const FeatureSpace& space, const Instance& x) {
  ordered_json j = ordered_json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& f = space.feature(i);
    if (f.is_numeric()) {
      j.push_back(x[i]);
    } else {
      j.push_back(f.categories.at(static_cast<std::size_t>(x[i])));
    }
  }
  return j;
}

Instance InstanceFromJson(const FeatureSpace& space, const ordered_json& j) {
  if (!j.is_array()) Fail(ErrorCode::kParse, "instance must be an array");
  std::vector<Cell> cells;
  for (const auto& e : j) {
    if (e.is_number()) {
      cells.emplace_back(e.get<double>());
    } else if (e.is_string()) {
      cells.emplace_back(e.get<std::string>());
    } else {
      Fail(ErrorCode::kParse, "instance entry must be a number or string");
    }
  }
  return MakeInstance(space, std::span<const Cell>(cells));
}

ordered_json ParseJson(std::string_view text, std::string_view what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json ReadJsonFile(const std::string& path) {
  return ParseJson(ReadTextFile(path), path);
}

void WriteTextFile(const std::string& path, std::string_view text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) Fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

void CheckFormat(const ordered_json& j, std::string_view format, int version) {
  if (!j.is_object() || j.value("format", std::string()) != format) {
    Fail(ErrorCode::kParse, "expected a '" + std::string(format) + "' document");
  }
  const int v = j.value("version", -1);
  if (v != version) {
    Fail(ErrorCode::kParse, "unsupported " + std::string(format) + " version " +
                                std::to_string(v) + " (expected " +
                                std::to_string(version) + ")");
  }
}

}  // namespace groupcf::internal
