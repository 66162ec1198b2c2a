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

// JSON (de)serialisation of the configuration structs. Parsers start from
// the struct defaults, so every key is optional; unknown keys are rejected.

#ifndef GROUPCF_CONFIG_HPP_
#define GROUPCF_CONFIG_HPP_

#include <string>
#include <string_view>

#include "groupcf/cf_single.hpp"
#include "groupcf/grouping.hpp"
#include "groupcf/models.hpp"
#include "groupcf/multi_cf.hpp"

namespace groupcf {

TrainConfig ParseTrainConfig(std::string_view json);
std::string TrainConfigToJson(const TrainConfig& cfg);

EaConfig ParseEaConfig(std::string_view json);
std::string EaConfigToJson(const EaConfig& cfg);

// Keys: target is given separately by callers; the rest mirror CfRequest
// with "search" holding an EA config object.
CfRequest ParseCfRequest(std::string_view json);
std::string CfRequestToJson(const CfRequest& req);

ClusterParams ParseClusterParams(std::string_view json);
std::string ClusterParamsToJson(const ClusterParams& params);

}  // namespace groupcf

#endif  // GROUPCF_CONFIG_HPP_
