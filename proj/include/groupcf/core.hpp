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

// Shared data model: feature schemas, instances, deltas, the delta
// application operator, cost functions and per-group feasible change sets.
//
// Categorical values are stored as the index of the label inside the
// feature's category list, so an Instance is a flat vector of doubles.

#ifndef GROUPCF_CORE_HPP_
#define GROUPCF_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace groupcf {

enum class FeatureKind : std::uint8_t { kNumeric, kCategorical };

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Minimum (alpha) and maximum (beta) feasible value; numeric only.
  double alpha = 0.0;
  double beta = 0.0;
  // Ordered category labels; categorical only.
  std::vector<std::string> categories;
  bool actionable = true;

  static FeatureDescriptor Numeric(std::string name, double alpha, double beta,
                                   bool actionable = true);
  static FeatureDescriptor Categorical(std::string name,
                                       std::vector<std::string> categories,
                                       bool actionable = true);

  bool is_numeric() const { return kind == FeatureKind::kNumeric; }
  std::optional<int> CategoryIndex(std::string_view label) const;

  bool operator==(const FeatureDescriptor&) const = default;
};

class FeatureSpace {
 public:
  FeatureSpace() = default;
  // Throws Error(kInvalidArgument) when a descriptor or the label set is
  // malformed.
  FeatureSpace(std::vector<FeatureDescriptor> features,
               std::vector<std::string> labels);

  std::size_t size() const { return features_.size(); }
  const FeatureDescriptor& feature(std::size_t i) const { return features_[i]; }
  const std::vector<FeatureDescriptor>& features() const { return features_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> IndexOf(std::string_view name) const;
  std::optional<int> LabelIndex(std::string_view label) const;
  std::size_t num_numeric() const;

  bool operator==(const FeatureSpace&) const = default;

 private:
  std::vector<FeatureDescriptor> features_;
  std::vector<std::string> labels_;
};

struct Instance {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const Instance&) const = default;
};

// A single cell as written by a user: a real for numeric features, a label
// for categorical ones.
using Cell = std::variant<double, std::string>;

// Builds and validates an instance from user-facing cells.
Instance MakeInstance(const FeatureSpace& space, std::span<const Cell> cells);
Instance MakeInstance(const FeatureSpace& space,
                      std::initializer_list<Cell> cells);

// Throws Error(kBounds) naming the offending feature.
void ValidateInstance(const FeatureSpace& space, const Instance& x);

enum class ChangeKind : std::uint8_t { kNone, kOffset, kSet };

struct Change {
  ChangeKind kind = ChangeKind::kNone;
  double offset = 0.0;
  int category = -1;

  static Change None() { return {}; }
  // A zero offset is canonicalised to None so that sparsity counts agree
  // with "feature unchanged".
  static Change Offset(double value) {
    return value == 0.0 ? Change{} : Change{ChangeKind::kOffset, value, -1};
  }
  static Change Set(int category) {
    return Change{ChangeKind::kSet, 0.0, category};
  }

  bool changed() const { return kind != ChangeKind::kNone; }
  bool operator==(const Change&) const = default;
};

struct Delta {
  std::vector<Change> changes;

  static Delta NoChange(std::size_t arity) {
    return Delta{std::vector<Change>(arity)};
  }

  std::size_t size() const { return changes.size(); }
  const Change& operator[](std::size_t i) const { return changes[i]; }
  Change& operator[](std::size_t i) { return changes[i]; }
  bool is_zero() const;
  bool operator==(const Delta&) const = default;
};

// Throws Error(kInvalidArgument) when d does not conform to space.
void ValidateDelta(const FeatureSpace& space, const Delta& d);

// Relative slack allowed on bound checks so that offsets taken from the
// edges of a feasible change set survive floating-point rounding.
inline constexpr double kBoundTolerance = 1e-9;

// x ⊕ d. Numeric features add the offset, categorical features take the set
// label. Throws InfeasibleApplication when the result leaves [alpha, beta].
Instance ApplyDelta(const FeatureSpace& space, const Instance& x,
                    const Delta& d);

// Non-throwing variant used in hot loops; writes into out and returns false
// on a bound violation.
bool TryApplyDelta(const FeatureSpace& space, const Instance& x,
                   const Delta& d, Instance& out);

// Sum of w_i * psi(d_i), psi = |offset| for numeric, 1 for a categorical
// change, 0 for no change. Empty weights mean all ones.
double DeltaCost(const Delta& d, std::span<const double> weights = {});

// Number of changed features.
std::size_t SparsityCost(const Delta& d);

// Euclidean norm with a categorical change counting as a unit axis.
double L2Norm(const Delta& d);

enum class CostKind : std::uint8_t { kWeightedPsi, kSparsity, kL2 };

double Cost(const Delta& d, CostKind kind, std::span<const double> weights = {});

const char* CostKindName(CostKind kind);
CostKind ParseCostKind(std::string_view name);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool Contains(double v) const;
  bool operator==(const Interval&) const = default;
};

struct FeasibleChangeSet {
  // Per feature; only meaningful for numeric features. Frozen features get
  // the degenerate interval [0, 0].
  std::vector<Interval> intervals;
  // Per feature; the allowed replacement categories (empty when frozen or
  // numeric).
  std::vector<std::vector<int>> categories;

  std::size_t size() const { return intervals.size(); }
  bool Contains(const Delta& d) const;
  // Clips numeric offsets into their interval and drops disallowed changes.
  Delta Clip(const Delta& d) const;
};

// l_i = alpha_i - min_j x_ji and u_i = beta_i - max_j x_ji. Throws on an
// empty group.
FeasibleChangeSet ComputeFeasibleChangeSet(const FeatureSpace& space,
                                           std::span<const Instance> group);

struct LabeledData {
  FeatureSpace space;
  std::vector<Instance> instances;
  // Index into space.labels().
  std::vector<int> labels;

  std::size_t size() const { return instances.size(); }
};

}  // namespace groupcf

#endif  // GROUPCF_CORE_HPP_
