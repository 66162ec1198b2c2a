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

// Individual counterfactuals, one per instance: a closed-form projection for
// linear models and a derivative-free search (the multi-instance EA run on a
// singleton group) for everything else.

#ifndef GROUPCF_CF_SINGLE_HPP_
#define GROUPCF_CF_SINGLE_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "groupcf/core.hpp"
#include "groupcf/models.hpp"
#include "groupcf/multi_cf.hpp"

namespace groupcf {

struct CfRequest {
  int target = 1;
  CostKind cost_kind = CostKind::kWeightedPsi;
  std::vector<double> weights;
  double C = 100.0;
  // Margin past the decision boundary for the closed form.
  double epsilon = 1e-2;
  std::uint64_t seed = 0;
  // Search budget and operators; its C, seed, cost kind and weights are
  // overwritten from the fields above.
  EaConfig search;

  void Validate(const FeatureSpace& space) const;
};

struct CfResult {
  Delta delta;
  int achieved = 0;
  double cost = 0.0;
  // achieved == target, established by re-predicting x ⊕ delta.
  bool valid = false;
};

enum class CfMethod : std::uint8_t { kAuto, kClosedForm, kSearch };

const char* CfMethodName(CfMethod method);
CfMethod ParseCfMethod(std::string_view name);

// Minimum-L2 move onto the boundary shifted by epsilon toward the target:
//   delta = (s * epsilon - (w·x + b)) / ||w||^2 * w,  s = +1 for label 1.
// Frozen features are excluded from the projection. Throws
// kUnsupportedModel without a linear view or with categorical features,
// kNoCounterfactual when no actionable weight is non-zero and
// kInfeasibleApplication when the projection leaves the domain.
CfResult ClosedFormLinearCf(const Model& model, const Instance& x,
                            const CfRequest& req);

// Never throws on search failure; valid=false reports an exhausted budget.
CfResult SearchCf(const Model& model, const Instance& x, const CfRequest& req);

// One result per instance, in order. Instance i is solved with seed
// DeriveSeed(tmpl.seed, i), so the output does not depend on `threads`.
// kAuto uses the closed form when the model is linear over numeric features
// and falls back to search when the projection is infeasible. Throws when
// the instances do not share one prediction.
std::vector<CfResult> BatchCf(const Model& model, std::span<const Instance> xs,
                              const CfRequest& tmpl,
                              CfMethod method = CfMethod::kAuto,
                              int threads = 1);

}  // namespace groupcf

#endif  // GROUPCF_CF_SINGLE_HPP_
