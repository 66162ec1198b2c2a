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

#include <gtest/gtest.h>

#include "groupcf/artifacts.hpp"
#include "groupcf/config.hpp"
#include "test_util.hpp"

namespace groupcf {
namespace {

TEST(Config, TrainRoundTrip) {
  TrainConfig cfg;
  cfg.kind = ModelKind::kLinear;
  cfg.learning_rate = 0.05;
  cfg.iterations = 77;
  const TrainConfig back = ParseTrainConfig(TrainConfigToJson(cfg));
  EXPECT_EQ(TrainConfigToJson(back), TrainConfigToJson(cfg));
  EXPECT_EQ(back.kind, ModelKind::kLinear);
  EXPECT_EQ(back.iterations, 77);
}

TEST(Config, EaRoundTripAndPartialObjects) {
  EaConfig cfg;
  cfg.mu = 7;
  cfg.C = 3.5;
  cfg.cost_kind = CostKind::kL2;
  cfg.weights = {1.0, 2.0};
  EXPECT_EQ(EaConfigToJson(ParseEaConfig(EaConfigToJson(cfg))), EaConfigToJson(cfg));
  const EaConfig partial = ParseEaConfig(R"({"generations": 5})");
  EXPECT_EQ(partial.generations, 5);
  EXPECT_EQ(partial.mu, EaConfig{}.mu);
  EXPECT_EQ(ParseEaConfig("").mu, EaConfig{}.mu);
}

TEST(Config, CfRequestAndClusterParams) {
  CfRequest req;
  req.epsilon = 0.5;
  req.search.generations = 3;
  const CfRequest back = ParseCfRequest(CfRequestToJson(req));
  EXPECT_EQ(back.epsilon, 0.5);
  EXPECT_EQ(back.search.generations, 3);

  ClusterParams p;
  p.strategy = ClusterStrategy::kKmedoidsCfDirection;
  p.k_max = 4;
  p.cost_subcluster = true;
  EXPECT_EQ(ClusterParamsToJson(ParseClusterParams(ClusterParamsToJson(p))),
            ClusterParamsToJson(p));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_ERROR_CODE(ParseEaConfig(R"({"generation": 5})"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(ParseTrainConfig(R"({"kind": "forest"})"), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ParseEaConfig(R"({"mu": "many"})"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(ParseEaConfig(R"({"mu": 0})"), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ParseClusterParams("[1, 2]"), ErrorCode::kParse);
  EXPECT_ERROR_CODE(ParseEaConfig("{"), ErrorCode::kParse);
}

TEST(Artifacts, CfBatchRoundTrip) {
  const auto space = testutil::NumericSpace(2, -5.0, 5.0);
  CfBatch batch;
  batch.space = space;
  batch.target = 1;
  batch.method = "closed-form";
  batch.instances = {Instance{{1, 2}}, Instance{{-1, 0.5}}};
  CfResult r;
  r.delta = testutil::Offsets({0.1, -0.2});
  r.valid = true;
  r.achieved = 1;
  r.cost = 0.30000000000000004;
  batch.results = {r, CfResult{Delta::NoChange(2), 0, 0.0, false}};
  const CfBatch back = DeserializeCfBatch(SerializeCfBatch(batch));
  EXPECT_EQ(back.space, batch.space);
  EXPECT_EQ(back.instances, batch.instances);
  ASSERT_EQ(back.results.size(), 2u);
  EXPECT_EQ(back.results[0].delta, r.delta);
  EXPECT_EQ(back.results[0].cost, r.cost);
  EXPECT_FALSE(back.results[1].valid);
  EXPECT_EQ(SerializeCfBatch(back), SerializeCfBatch(batch));
  EXPECT_ERROR_CODE(DeserializeCfBatch(R"({"format": "groupcf.cfs", "version": 9})"),
                    ErrorCode::kParse);
}

}  // namespace
}  // namespace groupcf
