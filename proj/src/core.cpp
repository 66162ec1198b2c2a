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

#include "groupcf/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "groupcf/error.hpp"

namespace groupcf {

const char* ErrorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kBounds: return "bounds";
    case ErrorCode::kInfeasibleApplication: return "infeasible-application";
    case ErrorCode::kDegenerateTraining: return "degenerate-training";
    case ErrorCode::kNoCounterfactual: return "no-counterfactual";
    case ErrorCode::kUnsupportedModel: return "unsupported-model";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kUndefinedDirection: return "undefined-direction";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

FeatureDescriptor FeatureDescriptor::Numeric(std::string name, double alpha,
                                             double beta, bool actionable) {
  FeatureDescriptor f;
  f.name = std::move(name);
  f.kind = FeatureKind::kNumeric;
  f.alpha = alpha;
  f.beta = beta;
  f.actionable = actionable;
  return f;
}

FeatureDescriptor FeatureDescriptor::Categorical(
    std::string name, std::vector<std::string> categories, bool actionable) {
  FeatureDescriptor f;
  f.name = std::move(name);
  f.kind = FeatureKind::kCategorical;
  f.categories = std::move(categories);
  f.actionable = actionable;
  return f;
}

std::optional<int> FeatureDescriptor::CategoryIndex(
    std::string_view label) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

FeatureSpace::FeatureSpace(std::vector<FeatureDescriptor> features,
                           std::vector<std::string> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  Require(!labels_.empty(), "label set must not be empty");
  std::set<std::string> label_names(labels_.begin(), labels_.end());
  Require(label_names.size() == labels_.size(), "duplicate label in label set");
  std::set<std::string> names;
  for (const auto& f : features_) {
    Require(!f.name.empty(), "feature name must not be empty");
    Require(names.insert(f.name).second,
            "duplicate feature name '" + f.name + "'");
    if (f.is_numeric()) {
      Require(std::isfinite(f.alpha) && std::isfinite(f.beta),
              "feature '" + f.name + "': bounds must be finite");
      Require(f.alpha <= f.beta,
              "feature '" + f.name + "': alpha must not exceed beta");
      Require(f.categories.empty(),
              "feature '" + f.name + "': numeric feature with categories");
    } else {
      Require(f.categories.size() >= 2,
              "feature '" + f.name + "': needs at least two categories");
      std::set<std::string> cats(f.categories.begin(), f.categories.end());
      Require(cats.size() == f.categories.size(),
              "feature '" + f.name + "': duplicate category");
    }
  }
}

std::optional<std::size_t> FeatureSpace::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<int> FeatureSpace::LabelIndex(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::size_t FeatureSpace::num_numeric() const {
  return static_cast<std::size_t>(std::count_if(
      features_.begin(), features_.end(),
      [](const FeatureDescriptor& f) { return f.is_numeric(); }));
}

namespace {

bool WithinBounds(const FeatureDescriptor& f, double v) {
  const double slack =
      kBoundTolerance * std::max({1.0, std::abs(f.alpha), std::abs(f.beta)});
  return v >= f.alpha - slack && v <= f.beta + slack;
}

bool IsCategoryIndex(const FeatureDescriptor& f, double v) {
  return v >= 0.0 && v < static_cast<double>(f.categories.size()) &&
         v == std::floor(v);
}

}  // namespace

Instance MakeInstance(const FeatureSpace& space, std::span<const Cell> cells) {
  Require(cells.size() == space.size(),
          "instance arity " + std::to_string(cells.size()) +
              " does not match feature count " + std::to_string(space.size()));
  Instance x;
  x.values.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& f = space.feature(i);
    if (f.is_numeric()) {
      const double* v = std::get_if<double>(&cells[i]);
      Require(v != nullptr, "feature '" + f.name + "' expects a number");
      x.values.push_back(*v);
    } else {
      const std::string* s = std::get_if<std::string>(&cells[i]);
      Require(s != nullptr, "feature '" + f.name + "' expects a category label");
      auto idx = f.CategoryIndex(*s);
      if (!idx) {
        Fail(ErrorCode::kBounds,
             "feature '" + f.name + "': unknown category '" + *s + "'");
      }
      x.values.push_back(*idx);
    }
  }
  ValidateInstance(space, x);
  return x;
}

Instance MakeInstance(const FeatureSpace& space,
                      std::initializer_list<Cell> cells) {
  return MakeInstance(space, std::span<const Cell>(cells.begin(), cells.size()));
}

void ValidateInstance(const FeatureSpace& space, const Instance& x) {
  Require(x.size() == space.size(), "instance arity does not match space");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& f = space.feature(i);
    const double v = x[i];
    if (f.is_numeric()) {
      if (!std::isfinite(v) || !WithinBounds(f, v)) {
        Fail(ErrorCode::kBounds, "feature '" + f.name + "': value " +
                                     std::to_string(v) + " outside [" +
                                     std::to_string(f.alpha) + ", " +
                                     std::to_string(f.beta) + "]");
      }
    } else if (!IsCategoryIndex(f, v)) {
      Fail(ErrorCode::kBounds, "feature '" + f.name + "': invalid category");
    }
  }
}

bool Delta::is_zero() const {
  return std::none_of(changes.begin(), changes.end(),
                      [](const Change& c) { return c.changed(); });
}

void ValidateDelta(const FeatureSpace& space, const Delta& d) {
  Require(d.size() == space.size(), "delta arity does not match space");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& f = space.feature(i);
    const Change& c = d[i];
    if (!c.changed()) continue;
    Require(f.actionable,
            "feature '" + f.name + "' is not actionable but is changed");
    if (c.kind == ChangeKind::kOffset) {
      Require(f.is_numeric(),
              "feature '" + f.name + "': numeric offset on categorical feature");
      Require(std::isfinite(c.offset), "feature '" + f.name + "': non-finite offset");
    } else {
      Require(!f.is_numeric(),
              "feature '" + f.name + "': categorical change on numeric feature");
      Require(c.category >= 0 &&
                  c.category < static_cast<int>(f.categories.size()),
              "feature '" + f.name + "': category index out of range");
    }
  }
}

bool TryApplyDelta(const FeatureSpace& space, const Instance& x,
                   const Delta& d, Instance& out) {
  out.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Change& c = d[i];
    switch (c.kind) {
      case ChangeKind::kNone:
        out.values[i] = x[i];
        break;
      case ChangeKind::kOffset: {
        const double v = x[i] + c.offset;
        if (!WithinBounds(space.feature(i), v)) return false;
        out.values[i] = v;
        break;
      }
      case ChangeKind::kSet:
        out.values[i] = c.category;
        break;
    }
  }
  return true;
}

Instance ApplyDelta(const FeatureSpace& space, const Instance& x,
                    const Delta& d) {
  Require(x.size() == space.size() && d.size() == space.size(),
          "instance/delta arity does not match space");
  Instance out;
  out.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Change& c = d[i];
    if (c.kind == ChangeKind::kOffset) {
      const double v = x[i] + c.offset;
      if (!WithinBounds(space.feature(i), v)) {
        throw InfeasibleApplication(i, space.feature(i).name);
      }
      out.values[i] = v;
    } else if (c.kind == ChangeKind::kSet) {
      out.values[i] = c.category;
    } else {
      out.values[i] = x[i];
    }
  }
  return out;
}

double DeltaCost(const Delta& d, std::span<const double> weights) {
  Require(weights.empty() || weights.size() == d.size(),
          "cost weights arity does not match delta");
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double psi = 0.0;
    if (d[i].kind == ChangeKind::kOffset) {
      psi = std::abs(d[i].offset);
    } else if (d[i].kind == ChangeKind::kSet) {
      psi = 1.0;
    }
    total += (weights.empty() ? 1.0 : weights[i]) * psi;
  }
  return total;
}

std::size_t SparsityCost(const Delta& d) {
  return static_cast<std::size_t>(
      std::count_if(d.changes.begin(), d.changes.end(),
                    [](const Change& c) { return c.changed(); }));
}

double L2Norm(const Delta& d) {
  double sq = 0.0;
  for (const Change& c : d.changes) {
    if (c.kind == ChangeKind::kOffset) {
      sq += c.offset * c.offset;
    } else if (c.kind == ChangeKind::kSet) {
      sq += 1.0;
    }
  }
  return std::sqrt(sq);
}

double Cost(const Delta& d, CostKind kind, std::span<const double> weights) {
  switch (kind) {
    case CostKind::kWeightedPsi: return DeltaCost(d, weights);
    case CostKind::kSparsity: return static_cast<double>(SparsityCost(d));
    case CostKind::kL2: return L2Norm(d);
  }
  return 0.0;
}

const char* CostKindName(CostKind kind) {
  switch (kind) {
    case CostKind::kWeightedPsi: return "weighted-psi";
    case CostKind::kSparsity: return "sparsity";
    case CostKind::kL2: return "l2";
  }
  return "unknown";
}

CostKind ParseCostKind(std::string_view name) {
  if (name == "weighted-psi") return CostKind::kWeightedPsi;
  if (name == "sparsity") return CostKind::kSparsity;
  if (name == "l2") return CostKind::kL2;
  Fail(ErrorCode::kInvalidArgument, "unknown cost kind '" + std::string(name) + "'");
}

bool Interval::Contains(double v) const {
  const double slack =
      kBoundTolerance * std::max({1.0, std::abs(lower), std::abs(upper)});
  return v >= lower - slack && v <= upper + slack;
}

bool FeasibleChangeSet::Contains(const Delta& d) const {
  if (d.size() != size()) return false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Change& c = d[i];
    if (c.kind == ChangeKind::kOffset) {
      if (!intervals[i].Contains(c.offset)) return false;
    } else if (c.kind == ChangeKind::kSet) {
      const auto& allowed = categories[i];
      if (std::find(allowed.begin(), allowed.end(), c.category) ==
          allowed.end()) {
        return false;
      }
    }
  }
  return true;
}

Delta FeasibleChangeSet::Clip(const Delta& d) const {
  Require(d.size() == size(), "delta arity does not match change set");
  Delta out = d;
  for (std::size_t i = 0; i < d.size(); ++i) {
    Change& c = out[i];
    if (c.kind == ChangeKind::kOffset) {
      c = Change::Offset(
          std::clamp(c.offset, intervals[i].lower, intervals[i].upper));
    } else if (c.kind == ChangeKind::kSet) {
      const auto& allowed = categories[i];
      if (std::find(allowed.begin(), allowed.end(), c.category) ==
          allowed.end()) {
        c = Change::None();
      }
    }
  }
  return out;
}

FeasibleChangeSet ComputeFeasibleChangeSet(const FeatureSpace& space,
                                           std::span<const Instance> group) {
  Require(!group.empty(), "feasible change set of an empty group");
  FeasibleChangeSet fcs;
  fcs.intervals.resize(space.size());
  fcs.categories.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& f = space.feature(i);
    if (!f.actionable) continue;
    if (f.is_numeric()) {
      double lo = group.front()[i];
      double hi = lo;
      for (const Instance& x : group) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
      }
      fcs.intervals[i] = Interval{f.alpha - lo, f.beta - hi};
    } else {
      auto& cats = fcs.categories[i];
      cats.resize(f.categories.size());
      for (std::size_t k = 0; k < cats.size(); ++k) cats[k] = static_cast<int>(k);
    }
  }
  return fcs;
}

}  // namespace groupcf
