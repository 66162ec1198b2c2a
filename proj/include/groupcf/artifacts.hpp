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

// Files exchanged between pipeline stages: individual counterfactual
// batches and multi-instance solutions.

#ifndef GROUPCF_ARTIFACTS_HPP_
#define GROUPCF_ARTIFACTS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "groupcf/cf_single.hpp"
#include "groupcf/core.hpp"
#include "groupcf/harness.hpp"

namespace groupcf {

inline constexpr int kCfBatchFormatVersion = 1;
inline constexpr int kMultiCfFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;

struct CfBatch {
  FeatureSpace space;
  int target = 1;
  std::string method;
  std::vector<Instance> instances;
  std::vector<CfResult> results;
};

std::string SerializeCfBatch(const CfBatch& batch);
CfBatch DeserializeCfBatch(std::string_view text);

struct MultiCfSolution {
  FeatureSpace space;
  int target = 1;
  std::string method;
  std::vector<GroupRecord> groups;
  // Size-weighted over groups.
  double correctness = 0.0;
};

std::string SerializeMultiCf(const MultiCfSolution& solution);

}  // namespace groupcf

#endif  // GROUPCF_ARTIFACTS_HPP_
