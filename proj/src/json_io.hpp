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

// Internal JSON conversions shared by the file formats.

#ifndef GROUPCF_SRC_JSON_IO_HPP_
#define GROUPCF_SRC_JSON_IO_HPP_

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "groupcf/core.hpp"

namespace groupcf::internal {

using nlohmann::ordered_json;

ordered_json SpaceToJson(const FeatureSpace& space);
FeatureSpace SpaceFromJson(const ordered_json& j);

// A delta is an array with one entry per feature: null for no change, a
// number for a numeric offset, a category label for a categorical change.
ordered_json DeltaToJson(const FeatureSpace& space, const Delta& d);
Delta DeltaFromJson(const FeatureSpace& space, const ordered_json& j);

// An instance is an array of numbers and category labels.
ordered_json InstanceToJson(const FeatureSpace& space, const Instance& x);
Instance InstanceFromJson(const FeatureSpace& space, const ordered_json& j);

ordered_json ParseJson(std::string_view text, std::string_view what);
ordered_json ReadJsonFile(const std::string& path);
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view text);

// Checks the "format" and "version" keys of a versioned document.
void CheckFormat(const ordered_json& j, std::string_view format, int version);

template <typename T>
T GetOr(const ordered_json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace groupcf::internal

#endif  // GROUPCF_SRC_JSON_IO_HPP_
