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

#include "groupcf/artifacts.hpp"

#include "groupcf/error.hpp"
#include "json_io.hpp"

namespace groupcf {

using internal::ordered_json;

std::string SerializeCfBatch(const CfBatch& batch) {
  Require(batch.instances.size() == batch.results.size(),
          "one result per instance is required");
  ordered_json j;
  j["format"] = "groupcf.cfs";
  j["version"] = kCfBatchFormatVersion;
  j["space"] = internal::SpaceToJson(batch.space);
  j["target"] = batch.target;
  j["method"] = batch.method;
  ordered_json items = ordered_json::array();
  for (std::size_t i = 0; i < batch.instances.size(); ++i) {
    const CfResult& r = batch.results[i];
    ordered_json item;
    item["instance"] = internal::InstanceToJson(batch.space, batch.instances[i]);
    item["delta"] = internal::DeltaToJson(batch.space, r.delta);
    item["valid"] = r.valid;
    item["achieved"] = r.achieved;
    item["cost"] = r.cost;
    items.push_back(std::move(item));
  }
  j["items"] = std::move(items);
  return j.dump(1) + "\n";
}

CfBatch DeserializeCfBatch(std::string_view text) {
  const ordered_json j = internal::ParseJson(text, "counterfactual file");
  internal::CheckFormat(j, "groupcf.cfs", kCfBatchFormatVersion);
  CfBatch batch;
  try {
    batch.space = internal::SpaceFromJson(j.at("space"));
    batch.target = j.at("target").get<int>();
    batch.method = internal::GetOr<std::string>(j, "method", "");
    for (const auto& item : j.at("items")) {
      batch.instances.push_back(
          internal::InstanceFromJson(batch.space, item.at("instance")));
      CfResult r;
      r.delta = internal::DeltaFromJson(batch.space, item.at("delta"));
      r.valid = item.at("valid").get<bool>();
      r.achieved = item.at("achieved").get<int>();
      r.cost = item.at("cost").get<double>();
      batch.results.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed counterfactual file: ") + e.what());
  }
  Require(batch.target == 0 || batch.target == 1, "target must be 0 or 1");
  return batch;
}

std::string SerializeMultiCf(const MultiCfSolution& solution) {
  ordered_json j;
  j["format"] = "groupcf.multicf";
  j["version"] = kMultiCfFormatVersion;
  j["target"] = solution.target;
  j["method"] = solution.method;
  j["correctness"] = solution.correctness;
  ordered_json groups = ordered_json::array();
  for (const auto& g : solution.groups) {
    ordered_json jg;
    jg["group"] = g.group;
    jg["noise_group"] = g.noise_group;
    jg["members"] = g.members;
    jg["size"] = g.size;
    jg["valid"] = g.valid;
    jg["correctness"] = g.correctness;
    jg["cost"] = g.cost;
    jg["delta"] = internal::DeltaToJson(solution.space, g.delta);
    jg["valid_bits"] = g.valid_bits;
    jg["trace"] = g.trace;
    groups.push_back(std::move(jg));
  }
  j["groups"] = std::move(groups);
  return j.dump(1) + "\n";
}

}  // namespace groupcf
