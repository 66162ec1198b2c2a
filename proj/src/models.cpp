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

#include "groupcf/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "groupcf/error.hpp"
#include "json_io.hpp"

namespace groupcf {

Encoding::Encoding(const FeatureSpace& space) {
  columns_.reserve(space.size());
  widths_.reserve(space.size());
  for (const auto& f : space.features()) {
    columns_.push_back(dimension_);
    const std::size_t w = f.is_numeric() ? 1 : f.categories.size();
    widths_.push_back(w);
    numeric_.push_back(f.is_numeric());
    dimension_ += w;
  }
}

void Encoding::Encode(const Instance& x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (numeric_[i]) {
      out[columns_[i]] = x[i];
    } else {
      out[columns_[i] + static_cast<std::size_t>(x[i])] = 1.0;
    }
  }
}

std::vector<double> Encoding::Encode(const Instance& x) const {
  std::vector<double> z(dimension_);
  Encode(x, z);
  return z;
}

Instance Encoding::Decode(std::span<const double> z) const {
  Require(z.size() == dimension_, "encoded vector has wrong dimension");
  Instance x;
  x.values.resize(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (numeric_[i]) {
      x.values[i] = z[columns_[i]];
    } else {
      auto block = z.subspan(columns_[i], widths_[i]);
      x.values[i] = static_cast<double>(
          std::max_element(block.begin(), block.end()) - block.begin());
    }
  }
  return x;
}

const char* ModelKindName(ModelKind kind) {
  return kind == ModelKind::kLinear ? "linear" : "tree_ensemble";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "linear") return ModelKind::kLinear;
  if (name == "tree_ensemble") return ModelKind::kTreeEnsemble;
  Fail(ErrorCode::kInvalidArgument,
       "unknown model kind '" + std::string(name) + "'");
}

void TrainConfig::Validate() const {
  Require(learning_rate > 0.0, "learning rate must be positive");
  Require(iterations >= 1, "iterations must be positive");
  Require(trees >= 1, "tree count must be positive");
  Require(max_depth >= 1, "tree depth must be positive");
  Require(regularization >= 0.0, "regularization must be non-negative");
  Require(min_child_weight >= 0.0, "min child weight must be non-negative");
}

Model::Model(FeatureSpace space)
    : space_(std::move(space)), encoding_(space_) {
  if (space_.labels().size() != 2) {
    Fail(ErrorCode::kUnsupportedModel,
         "models require a binary label set, got " +
             std::to_string(space_.labels().size()) + " labels");
  }
}

double Model::Margin(const Instance& x) const {
  thread_local std::vector<double> z;
  z.resize(encoding_.dimension());
  encoding_.Encode(x, z);
  return MarginEncoded(z);
}

LinearModel::LinearModel(FeatureSpace space, LinearView view)
    : Model(std::move(space)), view_(std::move(view)) {
  Require(view_.weights.size() == encoding().dimension(),
          "linear weights do not match the encoded dimension");
}

double LinearModel::MarginEncoded(std::span<const double> z) const {
  return std::inner_product(z.begin(), z.end(), view_.weights.begin(),
                            view_.bias);
}

double RegressionTree::Evaluate(std::span<const double> z) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(
        z[static_cast<std::size_t>(n.column)] < n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

TreeEnsembleModel::TreeEnsembleModel(FeatureSpace space, double base_margin,
                                     std::vector<RegressionTree> trees)
    : Model(std::move(space)),
      base_margin_(base_margin),
      trees_(std::move(trees)) {
  const int dim = static_cast<int>(encoding().dimension());
  for (const auto& t : trees_) {
    Require(!t.nodes.empty(), "empty regression tree");
    const int n = static_cast<int>(t.nodes.size());
    for (const auto& node : t.nodes) {
      if (node.is_leaf()) continue;
      Require(node.column < dim && node.left > 0 && node.left < n &&
                  node.right > 0 && node.right < n,
              "malformed regression tree node");
    }
  }
}

double TreeEnsembleModel::MarginEncoded(std::span<const double> z) const {
  double m = base_margin_;
  for (const auto& t : trees_) m += t.Evaluate(z);
  return m;
}

namespace {

void CheckTrainable(const LabeledData& data) {
  Require(data.instances.size() == data.labels.size(),
          "instances and labels differ in length");
  if (data.space.labels().size() != 2) {
    Fail(ErrorCode::kUnsupportedModel, "training requires a binary label set");
  }
  Require(data.size() >= 2, "training requires at least two instances");
  bool seen[2] = {false, false};
  for (int y : data.labels) {
    Require(y == 0 || y == 1, "label index out of range");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    Fail(ErrorCode::kDegenerateTraining,
         "training data contains a single class");
  }
}

std::vector<std::vector<double>> EncodeAll(const Encoding& enc,
                                           const LabeledData& data) {
  std::vector<std::vector<double>> rows;
  rows.reserve(data.size());
  for (const auto& x : data.instances) rows.push_back(enc.Encode(x));
  return rows;
}

double Sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

}  // namespace

ModelPtr TrainLinear(const LabeledData& data, const TrainConfig& cfg) {
  cfg.Validate();
  CheckTrainable(data);
  const Encoding enc(data.space);
  const auto rows = EncodeAll(enc, data);
  const std::size_t n = rows.size();
  const std::size_t dim = enc.dimension();

  std::vector<double> mean(dim, 0.0), scale(dim, 1.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += r[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t j = 0; j < dim; ++j) {
    double var = 0.0;
    for (const auto& r : rows) var += (r[j] - mean[j]) * (r[j] - mean[j]);
    const double sd = std::sqrt(var / static_cast<double>(n));
    scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  std::vector<std::vector<double>> std_rows = rows;
  for (auto& r : std_rows) {
    for (std::size_t j = 0; j < dim; ++j) r[j] = (r[j] - mean[j]) / scale[j];
  }

  std::vector<double> w(dim, 0.0), grad(dim);
  double b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int it = 0; it < cfg.iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = std_rows[i];
      const double m = std::inner_product(r.begin(), r.end(), w.begin(), b);
      const double err = Sigmoid(m) - data.labels[i];
      for (std::size_t j = 0; j < dim; ++j) grad[j] += err * r[j];
      grad_b += err;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      w[j] -= cfg.learning_rate * (grad[j] * inv_n + cfg.regularization * w[j]);
    }
    b -= cfg.learning_rate * grad_b * inv_n;
  }

  LinearView view;
  view.weights.resize(dim);
  view.bias = b;
  for (std::size_t j = 0; j < dim; ++j) {
    view.weights[j] = w[j] / scale[j];
    view.bias -= w[j] * mean[j] / scale[j];
  }
  return std::make_shared<LinearModel>(data.space, std::move(view));
}

namespace {

struct Split {
  double gain = 0.0;
  int column = -1;
  double threshold = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& rows,
              const std::vector<double>& grad, const std::vector<double>& hess,
              const TrainConfig& cfg)
      : rows_(rows), grad_(grad), hess_(hess), cfg_(cfg) {}

  RegressionTree Build() {
    std::vector<std::size_t> idx(rows_.size());
    std::iota(idx.begin(), idx.end(), 0);
    tree_.nodes.clear();
    tree_.nodes.emplace_back();
    Grow(0, idx, 0);
    return std::move(tree_);
  }

 private:
  double Score(double g, double h) const {
    return g * g / (h + cfg_.regularization);
  }

  Split FindSplit(const std::vector<std::size_t>& idx, double g_total,
                  double h_total) const {
    Split best;
    const std::size_t dim = rows_.front().size();
    const double parent = Score(g_total, h_total);
    std::vector<std::size_t> order = idx;
    for (std::size_t col = 0; col < dim; ++col) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return rows_[a][col] < rows_[b][col];
                       });
      double gl = 0.0, hl = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        gl += grad_[order[k]];
        hl += hess_[order[k]];
        const double v = rows_[order[k]][col];
        const double next = rows_[order[k + 1]][col];
        if (!(v < next)) continue;
        const double hr = h_total - hl;
        if (hl < cfg_.min_child_weight || hr < cfg_.min_child_weight) continue;
        const double gain = Score(gl, hl) + Score(g_total - gl, hr) - parent;
        if (gain > best.gain + 1e-12) {
          best.gain = gain;
          best.column = static_cast<int>(col);
          best.threshold = v + (next - v) / 2.0;
        }
      }
    }
    return best;
  }

  void Grow(std::size_t node, const std::vector<std::size_t>& idx, int depth) {
    double g = 0.0, h = 0.0;
    for (std::size_t i : idx) {
      g += grad_[i];
      h += hess_[i];
    }
    Split split;
    if (depth < cfg_.max_depth && idx.size() >= 2) split = FindSplit(idx, g, h);
    if (split.column < 0) {
      tree_.nodes[node].value =
          -cfg_.learning_rate * g / (h + cfg_.regularization);
      return;
    }
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      (rows_[i][static_cast<std::size_t>(split.column)] < split.threshold
           ? left
           : right)
          .push_back(i);
    }
    const int l = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    const int r = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[node].column = split.column;
    tree_.nodes[node].threshold = split.threshold;
    tree_.nodes[node].left = l;
    tree_.nodes[node].right = r;
    Grow(static_cast<std::size_t>(l), left, depth + 1);
    Grow(static_cast<std::size_t>(r), right, depth + 1);
  }

  const std::vector<std::vector<double>>& rows_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  const TrainConfig& cfg_;
  RegressionTree tree_;
};

}  // namespace

ModelPtr TrainTreeEnsemble(const LabeledData& data, const TrainConfig& cfg) {
  cfg.Validate();
  CheckTrainable(data);
  const Encoding enc(data.space);
  const auto rows = EncodeAll(enc, data);
  const std::size_t n = rows.size();

  const double pos = static_cast<double>(
      std::count(data.labels.begin(), data.labels.end(), 1));
  const double rate = pos / static_cast<double>(n);
  const double base = std::log(rate / (1.0 - rate));

  std::vector<double> margin(n, base), grad(n), hess(n);
  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<std::size_t>(cfg.trees));
  for (int t = 0; t < cfg.trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      grad[i] = p - data.labels[i];
      hess[i] = std::max(p * (1.0 - p), 1e-16);
    }
    RegressionTree tree = TreeBuilder(rows, grad, hess, cfg).Build();
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.Evaluate(rows[i]);
    trees.push_back(std::move(tree));
  }
  return std::make_shared<TreeEnsembleModel>(data.space, base,
                                              std::move(trees));
}

ModelPtr TrainModel(const LabeledData& data, const TrainConfig& cfg) {
  return cfg.kind == ModelKind::kLinear ? TrainLinear(data, cfg)
                                        : TrainTreeEnsemble(data, cfg);
}

std::vector<int> PredictBatch(const Model& model,
                              std::span<const Instance> xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(model.Predict(x));
  return out;
}

double Accuracy(const Model& model, const LabeledData& data) {
  if (data.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hits += model.Predict(data.instances[i]) == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

using internal::ordered_json;

std::string SerializeModel(const Model& model) {
  ordered_json j;
  j["format"] = "groupcf.model";
  j["version"] = kModelFormatVersion;
  j["kind"] = ModelKindName(model.kind());
  j["space"] = internal::SpaceToJson(model.space());
  if (const LinearView* v = model.linear_view()) {
    j["linear"] = {{"weights", v->weights}, {"bias", v->bias}};
  } else {
    const auto& ens = dynamic_cast<const TreeEnsembleModel&>(model);
    ordered_json trees = ordered_json::array();
    for (const auto& t : ens.trees()) {
      ordered_json nodes = ordered_json::array();
      for (const auto& n : t.nodes) {
        nodes.push_back({n.column, n.threshold, n.left, n.right, n.value});
      }
      trees.push_back(std::move(nodes));
    }
    j["ensemble"] = {{"base_margin", ens.base_margin()},
                     {"trees", std::move(trees)}};
  }
  return j.dump(1) + "\n";
}

ModelPtr DeserializeModel(std::string_view text) {
  const ordered_json j = internal::ParseJson(text, "model file");
  internal::CheckFormat(j, "groupcf.model", kModelFormatVersion);
  try {
    FeatureSpace space = internal::SpaceFromJson(j.at("space"));
    const ModelKind kind = ParseModelKind(j.at("kind").get<std::string>());
    if (kind == ModelKind::kLinear) {
      LinearView v;
      v.weights = j.at("linear").at("weights").get<std::vector<double>>();
      v.bias = j.at("linear").at("bias").get<double>();
      return std::make_shared<LinearModel>(std::move(space), std::move(v));
    }
    const auto& je = j.at("ensemble");
    std::vector<RegressionTree> trees;
    for (const auto& jt : je.at("trees")) {
      RegressionTree t;
      for (const auto& jn : jt) {
        TreeNode n;
        n.column = jn.at(0).get<int>();
        n.threshold = jn.at(1).get<double>();
        n.left = jn.at(2).get<int>();
        n.right = jn.at(3).get<int>();
        n.value = jn.at(4).get<double>();
        t.nodes.push_back(n);
      }
      trees.push_back(std::move(t));
    }
    return std::make_shared<TreeEnsembleModel>(
        std::move(space), je.at("base_margin").get<double>(), std::move(trees));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const Model& model, const std::string& path) {
  internal::WriteTextFile(path, SerializeModel(model));
}

ModelPtr LoadModel(const std::string& path) {
  return DeserializeModel(internal::ReadTextFile(path));
}

}  // namespace groupcf
