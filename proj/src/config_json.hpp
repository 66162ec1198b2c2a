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

#ifndef GROUPCF_SRC_CONFIG_JSON_HPP_
#define GROUPCF_SRC_CONFIG_JSON_HPP_

#include <initializer_list>
#include <string_view>

#include "groupcf/config.hpp"
#include "json_io.hpp"

namespace groupcf::internal {

void RejectUnknownKeys(const ordered_json& j, std::string_view what,
                       std::initializer_list<std::string_view> known);

TrainConfig TrainConfigFromJson(const ordered_json& j);
EaConfig EaConfigFromJson(const ordered_json& j);
CfRequest CfRequestFromJson(const ordered_json& j);
ClusterParams ClusterParamsFromJson(const ordered_json& j);

ordered_json ToJson(const TrainConfig& cfg);
ordered_json ToJson(const EaConfig& cfg);
ordered_json ToJson(const CfRequest& req);
ordered_json ToJson(const ClusterParams& p);

}  // namespace groupcf::internal

#endif  // GROUPCF_SRC_CONFIG_JSON_HPP_
