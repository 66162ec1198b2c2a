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

#include "groupcf/cf_single.hpp"

#include <cmath>

#include "groupcf/error.hpp"
#include "groupcf/parallel.hpp"
#include "groupcf/random.hpp"

namespace groupcf {

void CfRequest::Validate(const FeatureSpace& space) const {
  Require(target >= 0 && target < static_cast<int>(space.labels().size()),
          "target label out of range");
  Require(C > 0.0, "C must be positive");
  Require(epsilon > 0.0, "epsilon must be positive");
  Require(weights.empty() || weights.size() == space.size(),
          "cost weights arity does not match space");
}

const char* CfMethodName(CfMethod method) {
  switch (method) {
    case CfMethod::kAuto: return "auto";
    case CfMethod::kClosedForm: return "closed-form";
    case CfMethod::kSearch: return "search";
  }
  return "unknown";
}

CfMethod ParseCfMethod(std::string_view name) {
  if (name == "auto") return CfMethod::kAuto;
  if (name == "closed-form") return CfMethod::kClosedForm;
  if (name == "search") return CfMethod::kSearch;
  Fail(ErrorCode::kInvalidArgument, "unknown CF method '" + std::string(name) + "'");
}

namespace {

CfResult Finish(const Model& model, const Instance& x, Delta delta,
                const CfRequest& req) {
  CfResult r;
  Instance applied;
  if (TryApplyDelta(model.space(), x, delta, applied)) {
    r.achieved = model.Predict(applied);
  } else {
    r.achieved = model.Predict(x);
  }
  r.valid = r.achieved == req.target &&
            TryApplyDelta(model.space(), x, delta, applied);
  r.cost = Cost(delta, req.cost_kind, req.weights);
  r.delta = std::move(delta);
  return r;
}

bool IsLinearNumeric(const Model& model) {
  return model.linear_view() != nullptr &&
         model.space().num_numeric() == model.space().size();
}

}  // namespace

CfResult ClosedFormLinearCf(const Model& model, const Instance& x,
                            const CfRequest& req) {
  const FeatureSpace& space = model.space();
  req.Validate(space);
  const LinearView* view = model.linear_view();
  if (view == nullptr) {
    Fail(ErrorCode::kUnsupportedModel, "closed-form CF needs a linear model");
  }
  if (space.num_numeric() != space.size()) {
    Fail(ErrorCode::kUnsupportedModel,
         "closed-form CF does not support categorical features");
  }
  Require(x.size() == space.size(), "instance arity does not match space");

  // All-numeric spaces encode to the identity.
  double margin = view->bias;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    margin += view->weights[i] * x[i];
    if (space.feature(i).actionable) norm_sq += view->weights[i] * view->weights[i];
  }
  const int current = margin > 0.0 ? 1 : 0;
  if (current == req.target) {
    return Finish(model, x, Delta::NoChange(space.size()), req);
  }
  if (norm_sq == 0.0) {
    Fail(ErrorCode::kNoCounterfactual,
         "linear model has no actionable non-zero weight");
  }
  const double sign = req.target == 1 ? 1.0 : -1.0;
  const double step = (sign * req.epsilon - margin) / norm_sq;
  Delta d = Delta::NoChange(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.feature(i).actionable) d[i] = Change::Offset(step * view->weights[i]);
  }
  // Throws InfeasibleApplication when the projection leaves the domain.
  (void)ApplyDelta(space, x, d);
  return Finish(model, x, std::move(d), req);
}

CfResult SearchCf(const Model& model, const Instance& x, const CfRequest& req) {
  req.Validate(model.space());
  ValidateInstance(model.space(), x);
  if (model.Predict(x) == req.target) {
    return Finish(model, x, Delta::NoChange(model.space().size()), req);
  }
  EaConfig cfg = req.search;
  cfg.C = req.C;
  cfg.seed = req.seed;
  cfg.cost_kind = req.cost_kind;
  cfg.weights = req.weights;
  const Instance group[] = {x};
  MultiCfResult found = RunMuPlusLambda(group, model, req.target, cfg);
  return Finish(model, x, std::move(found.delta), req);
}

std::vector<CfResult> BatchCf(const Model& model, std::span<const Instance> xs,
                              const CfRequest& tmpl, CfMethod method,
                              int threads) {
  tmpl.Validate(model.space());
  if (xs.empty()) return {};
  const int current = model.Predict(xs.front());
  for (const Instance& x : xs) {
    Require(model.Predict(x) == current,
            "batch CF requires instances with the same prediction");
  }
  const bool closed_form =
      method == CfMethod::kClosedForm ||
      (method == CfMethod::kAuto && IsLinearNumeric(model));

  std::vector<CfResult> out(xs.size());
  ParallelFor(xs.size(), threads, [&](std::size_t i) {
    CfRequest req = tmpl;
    req.seed = DeriveSeed(tmpl.seed, i);
    req.search.threads = 1;
    if (!closed_form) {
      out[i] = SearchCf(model, xs[i], req);
      return;
    }
    if (method == CfMethod::kClosedForm) {
      out[i] = ClosedFormLinearCf(model, xs[i], req);
      return;
    }
    try {
      out[i] = ClosedFormLinearCf(model, xs[i], req);
    } catch (const InfeasibleApplication&) {
      out[i] = SearchCf(model, xs[i], req);
    }
  });
  return out;
}

}  // namespace groupcf
