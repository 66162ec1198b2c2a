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

#include <cmath>

#include "groupcf/cf_single.hpp"
#include "groupcf/harness.hpp"
#include "groupcf/random.hpp"
#include "test_util.hpp"

namespace groupcf {
namespace {

CfRequest Request(int target) {
  CfRequest req;
  req.target = target;
  return req;
}

TEST(ClosedForm, MatchesGridSearchOptimum) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto m = testutil::Linear(space, {1.0, 0.0}, 0.0);
  const Instance x = MakeInstance(space, {1.0, 0.0});
  const CfResult r = ClosedFormLinearCf(*m, x, Request(0));
  EXPECT_NEAR(r.delta[0].offset, -1.01, 1e-12);
  EXPECT_EQ(r.delta[1].kind, ChangeKind::kNone);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.achieved, 0);

  // Smallest flipping norm on a grid; the closed form sits epsilon/||w||
  // past it.
  double best = 1e9;
  for (int i = 0; i <= 2000; ++i) {
    for (int j = -50; j <= 50; ++j) {
      const double d0 = -2.0 + 0.001 * i, d1 = 0.02 * j;
      if (m->Predict(Instance{{1.0 + d0, d1}}) == 0) {
        best = std::min(best, std::hypot(d0, d1));
      }
    }
  }
  EXPECT_NEAR(best, 1.0, 1e-9);
  EXPECT_GE(L2Norm(r.delta), best);
  EXPECT_NEAR(L2Norm(r.delta), best + 0.01, 1e-9);
}

TEST(ClosedForm, AlreadyOnTargetSide) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto m = testutil::Linear(space, {1.0, 0.0}, 0.0);
  const CfResult r = ClosedFormLinearCf(*m, MakeInstance(space, {-1.0, 0.0}), Request(0));
  EXPECT_TRUE(r.delta.is_zero());
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_TRUE(r.valid);
}

TEST(ClosedForm, PointToHyperplaneDistance) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto m = testutil::Linear(space, {3.0, 4.0}, 0.0);
  const Instance x = MakeInstance(space, {5.0, 0.0});
  CfRequest req = Request(0);
  const CfResult r = ClosedFormLinearCf(*m, x, req);
  EXPECT_NEAR(L2Norm(r.delta), 3.0 + req.epsilon / 5.0, 1e-12);
  const double t = testutil::LineSearchFlip(*m, x, {-0.6, -0.8}, 0, 10.0);
  EXPECT_NEAR(t, 3.0, 1e-9);
}

TEST(ClosedForm, Errors) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto zero = testutil::Linear(space, {0.0, 0.0}, -1.0);
  EXPECT_ERROR_CODE(ClosedFormLinearCf(*zero, MakeInstance(space, {1.0, 1.0}), Request(1)),
                    ErrorCode::kNoCounterfactual);

  const FeatureSpace mixed({FeatureDescriptor::Numeric("a", 0.0, 1.0),
                            FeatureDescriptor::Categorical("c", {"u", "v"})},
                           {"n", "p"});
  const LinearModel lm(mixed, LinearView{{1.0, 0.0, 0.0}, -2.0});
  EXPECT_ERROR_CODE(ClosedFormLinearCf(lm, MakeInstance(mixed, {0.5, "u"}), Request(1)),
                    ErrorCode::kUnsupportedModel);

  const auto far = testutil::Linear(space, {1.0, 0.0}, -50.0);
  EXPECT_ERROR_CODE(ClosedFormLinearCf(*far, MakeInstance(space, {0.0, 0.0}), Request(1)),
                    ErrorCode::kInfeasibleApplication);
}

TEST(ClosedForm, FrozenFeaturesStayPut) {
  const FeatureSpace space({FeatureDescriptor::Numeric("a", -10.0, 10.0, false),
                            FeatureDescriptor::Numeric("b", -10.0, 10.0)},
                           {"n", "p"});
  const auto m = testutil::Linear(space, {1.0, 1.0}, 0.0);
  const CfResult r = ClosedFormLinearCf(*m, MakeInstance(space, {-1.0, -1.0}), Request(1));
  EXPECT_EQ(r.delta[0].kind, ChangeKind::kNone);
  EXPECT_NEAR(r.delta[1].offset, 2.01, 1e-12);
  EXPECT_TRUE(r.valid);
}

// On random linear models no randomly sampled flipping delta beats the
// closed form in L2.
TEST(ClosedForm, NoRandomFlipIsCheaper) {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + UniformIndex(rng, 3);
    const auto space = testutil::NumericSpace(d, -100.0, 100.0);
    std::vector<double> w(d);
    for (double& v : w) v = Uniform(rng, -2.0, 2.0);
    const auto m = testutil::Linear(space, w, Uniform(rng, -1.0, 1.0));
    Instance x;
    for (std::size_t i = 0; i < d; ++i) x.values.push_back(Uniform(rng, -3.0, 3.0));
    const int target = 1 - m->Predict(x);
    const CfResult r = ClosedFormLinearCf(*m, x, Request(target));
    ASSERT_TRUE(r.valid);
    for (int s = 0; s < 2000; ++s) {
      std::vector<double> delta(d);
      for (double& v : delta) v = Uniform(rng, -8.0, 8.0);
      Instance y = x;
      for (std::size_t i = 0; i < d; ++i) y.values[i] += delta[i];
      if (m->Predict(y) != target) continue;
      EXPECT_LE(L2Norm(r.delta), L2Norm(testutil::Offsets(delta)) + 1e-9);
    }
  }
}

TEST(SearchCf, WithinFivePercentOfClosedForm) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto m = testutil::Linear(space, {3.0, 4.0}, 0.0);
  const Instance x = MakeInstance(space, {5.0, 0.0});
  CfRequest req = Request(0);
  req.cost_kind = CostKind::kL2;
  req.seed = 4;
  const CfResult closed = ClosedFormLinearCf(*m, x, req);
  const CfResult found = SearchCf(*m, x, req);
  EXPECT_TRUE(found.valid);
  EXPECT_LE(found.cost, 1.05 * closed.cost);
  EXPECT_DOUBLE_EQ(found.cost, L2Norm(found.delta));
}

TEST(SearchCf, ZeroGenerationBudget) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto m = testutil::Linear(space, {3.0, 4.0}, 0.0);
  CfRequest req = Request(0);
  req.search.generations = 0;
  const CfResult a = SearchCf(*m, MakeInstance(space, {5.0, 0.0}), req);
  const CfResult b = SearchCf(*m, MakeInstance(space, {5.0, 0.0}), req);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.valid, m->Predict(ApplyDelta(space, Instance{{5.0, 0.0}}, a.delta)) == 0);
}

TEST(SearchCf, TreeModelOnXor) {
  SyntheticLayout layout;
  layout.kind = SyntheticKind::kXor;
  const auto data = MakeSynthetic(layout, 300, 2);
  TrainConfig cfg;
  const auto model = TrainTreeEnsemble(data, cfg);
  const Instance x = MakeInstance(data.space, {2.0, 8.0});
  ASSERT_EQ(model->Predict(x), 1);
  CfRequest req = Request(0);
  req.seed = 9;
  const CfResult r = SearchCf(*model, x, req);
  ASSERT_TRUE(r.valid);
  EXPECT_EQ(model->Predict(ApplyDelta(data.space, x, r.delta)), 0);
  EXPECT_DOUBLE_EQ(r.cost, DeltaCost(r.delta));
}

TEST(BatchCf, EmptyAndMixedInputs) {
  const auto space = testutil::NumericSpace(2, -10.0, 10.0);
  const auto m = testutil::Linear(space, {1.0, 0.0}, 0.0);
  EXPECT_TRUE(BatchCf(*m, {}, Request(1)).empty());
  const std::vector<Instance> mixed{Instance{{1.0, 0.0}}, Instance{{-1.0, 0.0}}};
  EXPECT_ERROR_CODE(BatchCf(*m, mixed, Request(1)), ErrorCode::kInvalidArgument);
}

TEST(BatchCf, EqualsIndependentCallsAtAnyThreadCount) {
  SyntheticLayout layout;
  layout.kind = SyntheticKind::kXor;
  const auto data = MakeSynthetic(layout, 200, 3);
  const auto model = TrainTreeEnsemble(data, TrainConfig{});
  std::vector<Instance> xs;
  for (const auto& x : data.instances) {
    if (model->Predict(x) == 0 && xs.size() < 10) xs.push_back(x);
  }
  ASSERT_EQ(xs.size(), 10u);
  CfRequest req = Request(1);
  req.seed = 77;
  req.search.generations = 40;
  const auto serial = BatchCf(*model, xs, req, CfMethod::kSearch, 1);
  const auto parallel = BatchCf(*model, xs, req, CfMethod::kSearch, 4);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CfRequest one = req;
    one.seed = DeriveSeed(req.seed, i);
    const CfResult single = SearchCf(*model, xs[i], one);
    EXPECT_EQ(serial[i].delta, single.delta);
    EXPECT_EQ(parallel[i].delta, single.delta);
    EXPECT_EQ(serial[i].valid, single.valid);
  }
}

TEST(BatchCf, AllValidOnSeparableLinearData) {
  SyntheticLayout layout;
  layout.kind = SyntheticKind::kBlobs;
  const auto data = MakeSynthetic(layout, 100, 5);
  TrainConfig cfg;
  cfg.kind = ModelKind::kLinear;
  const auto model = TrainLinear(data, cfg);
  std::vector<Instance> xs;
  for (const auto& x : data.instances) {
    if (model->Predict(x) == 0) xs.push_back(x);
  }
  const auto results = BatchCf(*model, xs, Request(1));
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_TRUE(r.valid);
    EXPECT_DOUBLE_EQ(r.cost, DeltaCost(r.delta));
  }
}

TEST(CfRequest, Validation) {
  const auto space = testutil::NumericSpace(2);
  CfRequest req;
  req.C = 0.0;
  EXPECT_ERROR_CODE(req.Validate(space), ErrorCode::kInvalidArgument);
  req = CfRequest{};
  req.epsilon = 0.0;
  EXPECT_ERROR_CODE(req.Validate(space), ErrorCode::kInvalidArgument);
  req = CfRequest{};
  req.target = 2;
  EXPECT_ERROR_CODE(req.Validate(space), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ParseCfMethod("closed-form"), CfMethod::kClosedForm);
}

}  // namespace
}  // namespace groupcf
