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

// Prediction functions: a uniform binary classifier interface and two
// in-repo trainers (logistic regression and a gradient-boosted tree
// ensemble). Models operate on a fixed real-valued encoding of instances
// where numeric features pass through and categorical features are one-hot.

#ifndef GROUPCF_MODELS_HPP_
#define GROUPCF_MODELS_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groupcf/core.hpp"

namespace groupcf {

class Encoding {
 public:
  Encoding() = default;
  explicit Encoding(const FeatureSpace& space);

  std::size_t dimension() const { return dimension_; }
  // First encoded column of a feature and the number of columns it spans.
  std::size_t column(std::size_t feature) const { return columns_[feature]; }
  std::size_t width(std::size_t feature) const { return widths_[feature]; }

  void Encode(const Instance& x, std::span<double> out) const;
  std::vector<double> Encode(const Instance& x) const;
  // Inverse of Encode for encodings of valid instances; a categorical block
  // decodes to its arg-max column.
  Instance Decode(std::span<const double> z) const;

 private:
  std::vector<std::size_t> columns_;
  std::vector<std::size_t> widths_;
  std::vector<bool> numeric_;
  std::size_t dimension_ = 0;
};

enum class ModelKind : std::uint8_t { kLinear, kTreeEnsemble };

const char* ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

struct TrainConfig {
  ModelKind kind = ModelKind::kTreeEnsemble;
  // Gradient step for the linear model; shrinkage for the ensemble.
  double learning_rate = 0.3;
  // Full-batch gradient iterations (linear).
  int iterations = 2000;
  int trees = 100;
  int max_depth = 3;
  // L2 penalty on weights (linear) or leaf values (ensemble).
  double regularization = 1e-3;
  // Minimum hessian mass per child (ensemble).
  double min_child_weight = 1.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Decision function w·encode(x) + b over the model's encoding.
struct LinearView {
  std::vector<double> weights;
  double bias = 0.0;
};

// Binary classifier over a FeatureSpace with exactly two labels. Label index
// 1 is predicted iff the margin is strictly positive. Instances are
// immutable after construction and safe to share across threads.
class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;
  // Raw score on an encoded instance.
  virtual double MarginEncoded(std::span<const double> z) const = 0;
  virtual const LinearView* linear_view() const { return nullptr; }

  double Margin(const Instance& x) const;
  int Predict(const Instance& x) const { return Margin(x) > 0.0 ? 1 : 0; }

  const FeatureSpace& space() const { return space_; }
  const Encoding& encoding() const { return encoding_; }

 protected:
  explicit Model(FeatureSpace space);

 private:
  FeatureSpace space_;
  Encoding encoding_;
};

using ModelPtr = std::shared_ptr<const Model>;

class LinearModel final : public Model {
 public:
  // Throws when the weight arity does not match the encoding.
  LinearModel(FeatureSpace space, LinearView view);

  ModelKind kind() const override { return ModelKind::kLinear; }
  double MarginEncoded(std::span<const double> z) const override;
  const LinearView* linear_view() const override { return &view_; }

 private:
  LinearView view_;
};

struct TreeNode {
  // Encoded column tested at this node; -1 marks a leaf.
  int column = -1;
  // Go left iff z[column] < threshold.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaf contribution (already scaled by the shrinkage).
  double value = 0.0;

  bool is_leaf() const { return column < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Evaluate(std::span<const double> z) const;
  bool operator==(const RegressionTree&) const = default;
};

class TreeEnsembleModel final : public Model {
 public:
  TreeEnsembleModel(FeatureSpace space, double base_margin,
                    std::vector<RegressionTree> trees);

  ModelKind kind() const override { return ModelKind::kTreeEnsemble; }
  double MarginEncoded(std::span<const double> z) const override;

  double base_margin() const { return base_margin_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

 private:
  double base_margin_;
  std::vector<RegressionTree> trees_;
};

// Logistic regression by full-batch gradient descent on standardised
// columns; the returned view is expressed in the raw encoding. Throws
// Error(kDegenerateTraining) on single-class data.
ModelPtr TrainLinear(const LabeledData& data, const TrainConfig& cfg);

// Gradient boosting of depth-limited regression trees on the logistic loss
// with Newton leaf values and constant shrinkage.
ModelPtr TrainTreeEnsemble(const LabeledData& data, const TrainConfig& cfg);

// Dispatches on cfg.kind.
ModelPtr TrainModel(const LabeledData& data, const TrainConfig& cfg);

std::vector<int> PredictBatch(const Model& model,
                              std::span<const Instance> xs);

double Accuracy(const Model& model, const LabeledData& data);

// Versioned JSON model file; see docs/formats.md.
inline constexpr int kModelFormatVersion = 1;

std::string SerializeModel(const Model& model);
ModelPtr DeserializeModel(std::string_view text);
void SaveModel(const Model& model, const std::string& path);
ModelPtr LoadModel(const std::string& path);

}  // namespace groupcf

#endif  // GROUPCF_MODELS_HPP_
