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

#include "groupcf/config.hpp"

#include <initializer_list>

#include "config_json.hpp"
#include "groupcf/error.hpp"
#include "json_io.hpp"

namespace groupcf {

namespace internal {

void RejectUnknownKeys(const ordered_json& j, std::string_view what,
                       std::initializer_list<std::string_view> known) {
  if (!j.is_object()) {
    Fail(ErrorCode::kParse, std::string(what) + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) {
      Fail(ErrorCode::kParse,
           "unknown key '" + key + "' in " + std::string(what));
    }
  }
}

namespace {

template <typename T>
void Read(const ordered_json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string ReadString(const ordered_json& j, const char* key,
                       std::string fallback) {
  Read(j, key, fallback);
  return fallback;
}

}  // namespace

TrainConfig TrainConfigFromJson(const ordered_json& j) {
  RejectUnknownKeys(j, "model config",
                    {"kind", "learning_rate", "iterations", "trees",
                     "max_depth", "regularization", "min_child_weight", "seed"});
  TrainConfig cfg;
  cfg.kind = ParseModelKind(ReadString(j, "kind", ModelKindName(cfg.kind)));
  Read(j, "learning_rate", cfg.learning_rate);
  Read(j, "iterations", cfg.iterations);
  Read(j, "trees", cfg.trees);
  Read(j, "max_depth", cfg.max_depth);
  Read(j, "regularization", cfg.regularization);
  Read(j, "min_child_weight", cfg.min_child_weight);
  Read(j, "seed", cfg.seed);
  cfg.Validate();
  return cfg;
}

ordered_json ToJson(const TrainConfig& cfg) {
  ordered_json j;
  j["kind"] = ModelKindName(cfg.kind);
  j["learning_rate"] = cfg.learning_rate;
  j["iterations"] = cfg.iterations;
  j["trees"] = cfg.trees;
  j["max_depth"] = cfg.max_depth;
  j["regularization"] = cfg.regularization;
  j["min_child_weight"] = cfg.min_child_weight;
  j["seed"] = cfg.seed;
  return j;
}

EaConfig EaConfigFromJson(const ordered_json& j) {
  RejectUnknownKeys(
      j, "EA config",
      {"mu", "lambda", "generations", "mutation_rate", "mutation_scale", "mutation_decades",
       "crossover_rate", "sparsity_reset", "init_change_prob", "tournament",
       "C", "cost_kind", "weights", "margin_weight", "seed", "patience",
       "threads"});
  EaConfig cfg;
  Read(j, "mu", cfg.mu);
  Read(j, "lambda", cfg.lambda);
  Read(j, "generations", cfg.generations);
  Read(j, "mutation_rate", cfg.mutation_rate);
  Read(j, "mutation_scale", cfg.mutation_scale);
  Read(j, "mutation_decades", cfg.mutation_decades);
  Read(j, "crossover_rate", cfg.crossover_rate);
  Read(j, "sparsity_reset", cfg.sparsity_reset);
  Read(j, "init_change_prob", cfg.init_change_prob);
  Read(j, "tournament", cfg.tournament);
  Read(j, "C", cfg.C);
  cfg.cost_kind =
      ParseCostKind(ReadString(j, "cost_kind", CostKindName(cfg.cost_kind)));
  Read(j, "weights", cfg.weights);
  Read(j, "margin_weight", cfg.margin_weight);
  Read(j, "seed", cfg.seed);
  Read(j, "patience", cfg.patience);
  Read(j, "threads", cfg.threads);
  cfg.Validate();
  return cfg;
}

ordered_json ToJson(const EaConfig& cfg) {
  ordered_json j;
  j["mu"] = cfg.mu;
  j["lambda"] = cfg.lambda;
  j["generations"] = cfg.generations;
  j["mutation_rate"] = cfg.mutation_rate;
  j["mutation_scale"] = cfg.mutation_scale;
  j["mutation_decades"] = cfg.mutation_decades;
  j["crossover_rate"] = cfg.crossover_rate;
  j["sparsity_reset"] = cfg.sparsity_reset;
  j["init_change_prob"] = cfg.init_change_prob;
  j["tournament"] = cfg.tournament;
  j["C"] = cfg.C;
  j["cost_kind"] = CostKindName(cfg.cost_kind);
  j["weights"] = cfg.weights;
  j["margin_weight"] = cfg.margin_weight;
  j["seed"] = cfg.seed;
  j["patience"] = cfg.patience;
  return j;
}

CfRequest CfRequestFromJson(const ordered_json& j) {
  RejectUnknownKeys(j, "CF request",
                    {"target", "cost_kind", "weights", "C", "epsilon", "seed",
                     "search"});
  CfRequest req;
  Read(j, "target", req.target);
  req.cost_kind =
      ParseCostKind(ReadString(j, "cost_kind", CostKindName(req.cost_kind)));
  Read(j, "weights", req.weights);
  Read(j, "C", req.C);
  Read(j, "epsilon", req.epsilon);
  Read(j, "seed", req.seed);
  if (auto it = j.find("search"); it != j.end()) {
    req.search = EaConfigFromJson(*it);
  }
  Require(req.C > 0.0, "C must be positive");
  Require(req.epsilon > 0.0, "epsilon must be positive");
  return req;
}

ordered_json ToJson(const CfRequest& req) {
  ordered_json j;
  j["target"] = req.target;
  j["cost_kind"] = CostKindName(req.cost_kind);
  j["weights"] = req.weights;
  j["C"] = req.C;
  j["epsilon"] = req.epsilon;
  j["seed"] = req.seed;
  j["search"] = ToJson(req.search);
  return j;
}

ClusterParams ClusterParamsFromJson(const ordered_json& j) {
  RejectUnknownKeys(j, "clustering params",
                    {"strategy", "eps", "min_pts", "k_min", "k_max",
                     "cost_subcluster", "cost_eps", "weights", "seed"});
  ClusterParams p;
  p.strategy = ParseClusterStrategy(
      ReadString(j, "strategy", ClusterStrategyName(p.strategy)));
  Read(j, "eps", p.eps);
  Read(j, "min_pts", p.min_pts);
  Read(j, "k_min", p.k_min);
  Read(j, "k_max", p.k_max);
  Read(j, "cost_subcluster", p.cost_subcluster);
  Read(j, "cost_eps", p.cost_eps);
  Read(j, "weights", p.weights);
  Read(j, "seed", p.seed);
  p.Validate();
  return p;
}

ordered_json ToJson(const ClusterParams& p) {
  ordered_json j;
  j["strategy"] = ClusterStrategyName(p.strategy);
  j["eps"] = p.eps;
  j["min_pts"] = p.min_pts;
  j["k_min"] = p.k_min;
  j["k_max"] = p.k_max;
  j["cost_subcluster"] = p.cost_subcluster;
  j["cost_eps"] = p.cost_eps;
  j["weights"] = p.weights;
  j["seed"] = p.seed;
  return j;
}

}  // namespace internal

namespace {

internal::ordered_json ParseObject(std::string_view json, const char* what) {
  if (json.empty()) return internal::ordered_json::object();
  return internal::ParseJson(json, what);
}

}  // namespace

TrainConfig ParseTrainConfig(std::string_view json) {
  return internal::TrainConfigFromJson(ParseObject(json, "model config"));
}
std::string TrainConfigToJson(const TrainConfig& cfg) {
  return internal::ToJson(cfg).dump();
}

EaConfig ParseEaConfig(std::string_view json) {
  return internal::EaConfigFromJson(ParseObject(json, "EA config"));
}
std::string EaConfigToJson(const EaConfig& cfg) {
  return internal::ToJson(cfg).dump();
}

CfRequest ParseCfRequest(std::string_view json) {
  return internal::CfRequestFromJson(ParseObject(json, "CF request"));
}
std::string CfRequestToJson(const CfRequest& req) {
  return internal::ToJson(req).dump();
}

ClusterParams ParseClusterParams(std::string_view json) {
  return internal::ClusterParamsFromJson(ParseObject(json, "clustering params"));
}
std::string ClusterParamsToJson(const ClusterParams& params) {
  return internal::ToJson(params).dump();
}

}  // namespace groupcf
