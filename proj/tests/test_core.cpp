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

#include <random>

#include "groupcf/core.hpp"
#include "groupcf/random.hpp"
#include "test_util.hpp"

namespace groupcf {
namespace {

FeatureSpace ColorSpace() {
  return FeatureSpace({FeatureDescriptor::Numeric("size", 0.0, 10.0),
                       FeatureDescriptor::Categorical("color", {"red", "green", "blue"})},
                      {"neg", "pos"});
}

TEST(ApplyDelta, NoChangeIsIdentity) {
  const auto space = testutil::NumericSpace(2);
  const Instance x = MakeInstance(space, {1.0, 2.0});
  EXPECT_EQ(ApplyDelta(space, x, Delta::NoChange(2)), x);
}

TEST(ApplyDelta, OffsetAndCategoricalSet) {
  const auto space = ColorSpace();
  const Instance x = MakeInstance(space, {1.0, "red"});
  Delta d{{Change::Offset(0.5), Change::Set(2)}};
  EXPECT_EQ(ApplyDelta(space, x, d), MakeInstance(space, {1.5, "blue"}));
}

TEST(ApplyDelta, BoundViolationNamesFeature) {
  const FeatureSpace space({FeatureDescriptor::Numeric("a", 0.0, 10.0)}, {"n", "p"});
  const Instance x = MakeInstance(space, {9.8});
  try {
    ApplyDelta(space, x, testutil::Offsets({0.5}));
    FAIL() << "expected infeasible application";
  } catch (const InfeasibleApplication& e) {
    EXPECT_EQ(e.feature(), 0u);
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleApplication);
  }
  Instance out;
  EXPECT_FALSE(TryApplyDelta(space, x, testutil::Offsets({0.5}), out));
}

TEST(ApplyDelta, LandingExactlyOnBoundSucceeds) {
  const FeatureSpace space({FeatureDescriptor::Numeric("a", 0.0, 10.0)}, {"n", "p"});
  const Instance x = MakeInstance(space, {9.7});
  EXPECT_NO_THROW(ApplyDelta(space, x, testutil::Offsets({10.0 - 9.7})));
}

TEST(DeltaCost, Examples) {
  EXPECT_EQ(DeltaCost(Delta::NoChange(2)), 0.0);
  Delta d{{Change::Offset(0.5), Change::Set(2)}};
  EXPECT_DOUBLE_EQ(DeltaCost(d), 1.5);
  const std::vector<double> w{3.0, 1.0};
  EXPECT_DOUBLE_EQ(DeltaCost(testutil::Offsets({-2.0, 0.0}), w), 6.0);
}

TEST(SparsityCost, Examples) {
  EXPECT_EQ(SparsityCost(Delta::NoChange(5)), 0u);
  EXPECT_EQ(SparsityCost(testutil::Offsets({1.0, 0.0, -2.0, 0.0, 0.0})), 2u);
  EXPECT_EQ(SparsityCost(testutil::Offsets({1.0, 2.0, 3.0})), 3u);
}

TEST(Cost, KindsAndNames) {
  const Delta d = testutil::Offsets({3.0, -4.0});
  EXPECT_DOUBLE_EQ(Cost(d, CostKind::kWeightedPsi), 7.0);
  EXPECT_DOUBLE_EQ(Cost(d, CostKind::kSparsity), 2.0);
  EXPECT_DOUBLE_EQ(Cost(d, CostKind::kL2), 5.0);
  for (CostKind k : {CostKind::kWeightedPsi, CostKind::kSparsity, CostKind::kL2}) {
    EXPECT_EQ(ParseCostKind(CostKindName(k)), k);
  }
  EXPECT_ERROR_CODE(ParseCostKind("l7"), ErrorCode::kInvalidArgument);
}

TEST(DeltaCost, ZeroIffNoChangeAndAdditive) {
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> v(6);
    for (double& x : v) x = Bernoulli(rng, 0.4) ? Uniform(rng, -3.0, 3.0) : 0.0;
    const Delta d = testutil::Offsets(v);
    const bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    EXPECT_EQ(DeltaCost(d) == 0.0, zero);
    EXPECT_EQ(SparsityCost(d) == 0u, zero);
    EXPECT_EQ(d.is_zero(), zero);
    Delta left = d, right = d;
    for (std::size_t i = 0; i < 6; ++i) (i < 3 ? right : left).changes[i] = Change::None();
    EXPECT_NEAR(DeltaCost(left) + DeltaCost(right), DeltaCost(d), 1e-12);
  }
}

TEST(FeasibleChangeSet, Examples) {
  const FeatureSpace space({FeatureDescriptor::Numeric("a", 0.0, 10.0)}, {"n", "p"});
  std::vector<Instance> group{MakeInstance(space, {2.0}), MakeInstance(space, {5.0})};
  auto fcs = ComputeFeasibleChangeSet(space, group);
  EXPECT_DOUBLE_EQ(fcs.intervals[0].lower, -2.0);
  EXPECT_DOUBLE_EQ(fcs.intervals[0].upper, 5.0);

  std::vector<Instance> single{MakeInstance(space, {0.0})};
  fcs = ComputeFeasibleChangeSet(space, single);
  EXPECT_DOUBLE_EQ(fcs.intervals[0].lower, 0.0);
  EXPECT_DOUBLE_EQ(fcs.intervals[0].upper, 10.0);

  EXPECT_ERROR_CODE(ComputeFeasibleChangeSet(space, std::vector<Instance>{}),
                    ErrorCode::kInvalidArgument);
}

TEST(FeasibleChangeSet, CategoricalAndFrozen) {
  const FeatureSpace space(
      {FeatureDescriptor::Numeric("a", 0.0, 10.0, /*actionable=*/false),
       FeatureDescriptor::Categorical("c", {"x", "y", "z"})},
      {"n", "p"});
  std::vector<Instance> group{MakeInstance(space, {4.0, "y"})};
  const auto fcs = ComputeFeasibleChangeSet(space, group);
  EXPECT_EQ(fcs.intervals[0], (Interval{0.0, 0.0}));
  EXPECT_EQ(fcs.categories[1], (std::vector<int>{0, 1, 2}));
  EXPECT_FALSE(fcs.Contains(Delta{{Change::Offset(1.0), Change::None()}}));
  EXPECT_TRUE(fcs.Contains(Delta{{Change::None(), Change::Set(2)}}));
  const Delta clipped = fcs.Clip(Delta{{Change::Offset(1.0), Change::Set(0)}});
  EXPECT_EQ(clipped, (Delta{{Change::None(), Change::Set(0)}}));
}

// Any offset inside [l, u] keeps every member inside the domain.
TEST(FeasibleChangeSet, SampledOffsetsApplyToEveryMember) {
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + UniformIndex(rng, 5);
    std::vector<FeatureDescriptor> f;
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = Uniform(rng, -50.0, 50.0);
      f.push_back(FeatureDescriptor::Numeric("f" + std::to_string(i), lo,
                                             lo + Uniform(rng, 0.0, 20.0)));
    }
    const FeatureSpace space(std::move(f), {"n", "p"});
    std::vector<Instance> group(1 + UniformIndex(rng, 8));
    for (auto& x : group) {
      for (std::size_t i = 0; i < d; ++i) {
        x.values.push_back(Uniform(rng, space.feature(i).alpha, space.feature(i).beta));
      }
    }
    const auto fcs = ComputeFeasibleChangeSet(space, group);
    std::vector<double> offsets(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& iv = fcs.intervals[i];
      EXPECT_LE(iv.lower, 0.0);
      EXPECT_GE(iv.upper, 0.0);
      const double r = Uniform01(rng);
      offsets[i] = r < 0.1 ? iv.lower : r < 0.2 ? iv.upper : Uniform(rng, iv.lower, iv.upper);
    }
    const Delta delta = testutil::Offsets(offsets);
    ASSERT_TRUE(fcs.Contains(delta));
    for (const auto& x : group) EXPECT_NO_THROW(ApplyDelta(space, x, delta));
  }
}

TEST(Validation, RejectsMalformedValues) {
  const auto space = ColorSpace();
  EXPECT_ERROR_CODE(MakeInstance(space, {11.0, "red"}), ErrorCode::kBounds);
  EXPECT_ERROR_CODE(MakeInstance(space, {1.0, "purple"}), ErrorCode::kBounds);
  EXPECT_ERROR_CODE(MakeInstance(space, {1.0}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ValidateDelta(space, Delta{{Change::Set(0), Change::None()}}),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ValidateDelta(space, Delta{{Change::None(), Change::Offset(1.0)}}),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ValidateDelta(space, Delta{{Change::None(), Change::Set(7)}}),
                    ErrorCode::kInvalidArgument);
}

TEST(Validation, FrozenFeatureRejectsChanges) {
  const FeatureSpace space({FeatureDescriptor::Numeric("age", 0.0, 100.0, false)},
                           {"n", "p"});
  EXPECT_ERROR_CODE(ValidateDelta(space, testutil::Offsets({1.0})),
                    ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(ValidateDelta(space, Delta::NoChange(1)));
}

TEST(FeatureSpace, RejectsInvalidDescriptors) {
  EXPECT_ERROR_CODE(FeatureSpace({FeatureDescriptor::Numeric("a", 2.0, 1.0)}, {"n", "p"}),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(FeatureSpace({FeatureDescriptor::Categorical("c", {"only"})}, {"n", "p"}),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(FeatureSpace({FeatureDescriptor::Numeric("a", 0.0, 1.0),
                                  FeatureDescriptor::Numeric("a", 0.0, 1.0)},
                                 {"n", "p"}),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(FeatureSpace({FeatureDescriptor::Numeric("a", 0.0, 1.0)}, {}),
                    ErrorCode::kInvalidArgument);
}

TEST(Random, DeriveSeedIsStableAndDistinct) {
  EXPECT_EQ(DeriveSeed(1, 2), DeriveSeed(1, 2));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(1, 3));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(2, 2));
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = Uniform01(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(UniformIndex(rng, 7), 7u);
  }
}

}  // namespace
}  // namespace groupcf
