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

// Metrics, cross-validated benchmark protocol and report writers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "config_json.hpp"
#include "format.hpp"
#include "groupcf/artifacts.hpp"
#include "groupcf/error.hpp"
#include "groupcf/harness.hpp"
#include "groupcf/random.hpp"
#include "groupcf/version.hpp"
#include "json_io.hpp"

namespace groupcf {

using internal::FormatDouble;
using internal::ordered_json;

double CorrectnessMetric(const Model& model, std::span<const Instance> xs,
                         const std::vector<std::vector<std::size_t>>& groups,
                         std::span<const Delta> deltas, int target) {
  Require(groups.size() == deltas.size(), "one delta per group is required");
  std::size_t total = 0;
  std::size_t hits = 0;
  std::vector<Instance> members;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    members.clear();
    for (std::size_t i : groups[g]) {
      Require(i < xs.size(), "group member index out of range");
      members.push_back(xs[i]);
    }
    const auto valid = EvaluateValidity(model, members, deltas[g], target);
    total += valid.size();
    hits += static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double CostMetric(const Delta& d, const FeatureSpace& space) {
  if (space.size() == 0) return 0.0;
  return SparsityCost(d) / static_cast<double>(space.size());
}

namespace {

std::string RoundTwo(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

}  // namespace

std::string FormatMeanVariance(double mean, double variance) {
  return RoundTwo(mean) + " ± " + RoundTwo(variance);
}

std::vector<std::vector<std::size_t>> MakeFolds(std::size_t n, std::size_t k,
                                                std::uint64_t seed) {
  Require(k >= 2, "at least two folds are required");
  Require(n >= k, "fewer instances than folds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[UniformIndex(rng, i)]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t p = 0; p < n; ++p) folds[p % k].push_back(perm[p]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

const char* ConditionName(Condition c) {
  switch (c) {
    case Condition::kNone: return "none";
    case Condition::kClusterInstances: return "cluster-instances";
    case Condition::kClusterCfs: return "cluster-cfs";
  }
  return "unknown";
}

const char* ConditionTitle(Condition c) {
  switch (c) {
    case Condition::kNone: return "No clustering";
    case Condition::kClusterInstances: return "Clustering of instances";
    case Condition::kClusterCfs: return "Clustering of CFs";
  }
  return "unknown";
}

Condition ParseCondition(std::string_view name) {
  for (Condition c : {Condition::kNone, Condition::kClusterInstances,
                      Condition::kClusterCfs}) {
    if (name == ConditionName(c)) return c;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown condition '" + std::string(name) + "'");
}

const char* MethodName(Method m) {
  return m == Method::kEa ? "ea" : "warren";
}

const char* MethodTitle(Method m) {
  return m == Method::kEa ? "EA" : "Warren et al.";
}

Method ParseMethod(std::string_view name) {
  if (name == "ea") return Method::kEa;
  if (name == "warren") return Method::kWarren;
  Fail(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

void BenchmarkConfig::Validate() const {
  Require(folds >= 2, "folds must be at least 2");
  Require(!methods.empty(), "at least one method is required");
  Require(!conditions.empty(), "at least one condition is required");
  Require(synthetic.has_value() || (!data_path.empty() && !schema_path.empty()),
          "either data.csv and data.schema or a synthetic layout is required");
  Require(threads >= 1, "threads must be at least 1");
  model.Validate();
  ea.Validate();
  cluster_instances.Validate();
  cluster_cfs.Validate();
  Require(cf.target == 0 || cf.target == 1, "target must be 0 or 1");
}

namespace {

std::string Resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

template <typename T>
std::vector<T> ParseList(const ordered_json& j, const char* what,
                         T (*parse)(std::string_view)) {
  if (!j.is_array()) Fail(ErrorCode::kParse, std::string(what) + " must be an array");
  std::vector<T> out;
  for (const auto& item : j) {
    if (!item.is_string()) {
      Fail(ErrorCode::kParse, std::string(what) + " entries must be strings");
    }
    const T v = parse(item.get<std::string>());
    if (std::find(out.begin(), out.end(), v) != out.end()) {
      Fail(ErrorCode::kParse, std::string("duplicate entry in ") + what);
    }
    out.push_back(v);
  }
  return out;
}

ordered_json SyntheticToJson(const SyntheticLayout& l, std::size_t n) {
  ordered_json j;
  j["kind"] = SyntheticKindName(l.kind);
  j["dims"] = l.dims;
  j["separation"] = l.separation;
  j["bundles"] = l.bundles;
  j["noise_features"] = l.noise_features;
  j["categorical_features"] = l.categorical_features;
  j["n"] = n;
  return j;
}

}  // namespace

BenchmarkConfig ParseBenchmarkConfig(std::string_view json,
                                     const std::string& base_dir) {
  const ordered_json j = internal::ParseJson(json, "benchmark config");
  internal::CheckFormat(j, "groupcf.bench", kBenchConfigFormatVersion);
  internal::RejectUnknownKeys(
      j, "benchmark config",
      {"format", "version", "data", "synthetic", "model", "cf", "cf_method",
       "clustering", "ea", "folds", "methods", "conditions", "output_dir",
       "seed", "threads"});
  BenchmarkConfig cfg;
  try {
    if (auto it = j.find("data"); it != j.end()) {
      internal::RejectUnknownKeys(*it, "data", {"csv", "schema"});
      cfg.data_path = Resolve(it->at("csv").get<std::string>(), base_dir);
      cfg.schema_path = Resolve(it->at("schema").get<std::string>(), base_dir);
    }
    if (auto it = j.find("synthetic"); it != j.end()) {
      ordered_json layout = *it;
      if (!layout.is_object()) Fail(ErrorCode::kParse, "synthetic must be an object");
      if (auto n = layout.find("n"); n != layout.end()) {
        cfg.synthetic_n = n->get<std::size_t>();
        layout.erase("n");
      }
      cfg.synthetic = ParseSyntheticLayout(layout.dump());
    }
    if (cfg.synthetic && !cfg.data_path.empty()) {
      Fail(ErrorCode::kParse, "give either data or synthetic, not both");
    }
    if (auto it = j.find("model"); it != j.end()) {
      cfg.model = internal::TrainConfigFromJson(*it);
    }
    if (auto it = j.find("cf"); it != j.end()) {
      cfg.cf = internal::CfRequestFromJson(*it);
    }
    cfg.cf_method = ParseCfMethod(
        internal::GetOr<std::string>(j, "cf_method", CfMethodName(cfg.cf_method)));
    if (auto it = j.find("clustering"); it != j.end()) {
      internal::RejectUnknownKeys(*it, "clustering", {"instances", "cfs"});
      if (auto c = it->find("instances"); c != it->end()) {
        cfg.cluster_instances = internal::ClusterParamsFromJson(*c);
      } else {
        cfg.cluster_instances.strategy = ClusterStrategy::kDbscanInstances;
      }
      if (auto c = it->find("cfs"); c != it->end()) {
        cfg.cluster_cfs = internal::ClusterParamsFromJson(*c);
      }
    } else {
      cfg.cluster_instances.strategy = ClusterStrategy::kDbscanInstances;
    }
    if (auto it = j.find("ea"); it != j.end()) cfg.ea = internal::EaConfigFromJson(*it);
    cfg.folds = internal::GetOr(j, "folds", cfg.folds);
    if (auto it = j.find("methods"); it != j.end()) {
      cfg.methods = ParseList<Method>(*it, "methods", &ParseMethod);
    }
    if (auto it = j.find("conditions"); it != j.end()) {
      cfg.conditions = ParseList<Condition>(*it, "conditions", &ParseCondition);
    }
    cfg.output_dir = internal::GetOr(j, "output_dir", cfg.output_dir);
    if (j.contains("output_dir")) cfg.output_dir = Resolve(cfg.output_dir, base_dir);
    cfg.seed = internal::GetOr(j, "seed", cfg.seed);
    cfg.threads = internal::GetOr(j, "threads", cfg.threads);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed benchmark config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

BenchmarkConfig LoadBenchmarkConfig(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  return ParseBenchmarkConfig(internal::ReadTextFile(path), base);
}

namespace {

ordered_json ConfigJson(const BenchmarkConfig& cfg) {
  ordered_json j;
  j["format"] = "groupcf.bench";
  j["version"] = kBenchConfigFormatVersion;
  if (cfg.synthetic) {
    j["synthetic"] = SyntheticToJson(*cfg.synthetic, cfg.synthetic_n);
  } else {
    j["data"] = {{"csv", cfg.data_path}, {"schema", cfg.schema_path}};
  }
  j["model"] = internal::ToJson(cfg.model);
  j["cf"] = internal::ToJson(cfg.cf);
  j["cf_method"] = CfMethodName(cfg.cf_method);
  j["clustering"] = {{"instances", internal::ToJson(cfg.cluster_instances)},
                     {"cfs", internal::ToJson(cfg.cluster_cfs)}};
  j["ea"] = internal::ToJson(cfg.ea);
  j["folds"] = cfg.folds;
  ordered_json methods = ordered_json::array();
  for (Method m : cfg.methods) methods.push_back(MethodName(m));
  j["methods"] = std::move(methods);
  ordered_json conditions = ordered_json::array();
  for (Condition c : cfg.conditions) conditions.push_back(ConditionName(c));
  j["conditions"] = std::move(conditions);
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace

std::string BenchmarkConfigToJson(const BenchmarkConfig& cfg) {
  return ConfigJson(cfg).dump(1) + "\n";
}

const Aggregate* EvalReport::Find(Condition c, Method m) const {
  for (const auto& a : aggregates) {
    if (a.condition == c && a.method == m) return &a;
  }
  return nullptr;
}

std::vector<GroupRecord> SolveGroups(const Model& model,
                                     std::span<const Instance> xs,
                                     std::span<const CfResult> cfs,
                                     const Grouping& grouping, Method method,
                                     const EaConfig& ea, int target,
                                     std::uint64_t seed, int threads) {
  Require(cfs.size() == xs.size(), "one individual counterfactual per instance");
  std::vector<std::vector<std::size_t>> groups = grouping.groups;
  const std::size_t clustered = groups.size();
  if (!grouping.noise.empty()) groups.push_back(grouping.noise);

  std::vector<GroupRecord> records;
  records.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& members = groups[g];
    std::vector<Instance> group;
    std::vector<Delta> valid_cfs;
    std::vector<Delta> all_cfs;
    for (std::size_t i : members) {
      Require(i < xs.size(), "group member index out of range");
      group.push_back(xs[i]);
      all_cfs.push_back(cfs[i].delta);
      if (cfs[i].valid) valid_cfs.push_back(cfs[i].delta);
    }
    MultiCfResult result;
    if (method == Method::kEa) {
      EaConfig cfg = ea;
      cfg.seed = DeriveSeed(seed, g);
      cfg.threads = threads;
      std::vector<Delta> warm = valid_cfs;
      if (!valid_cfs.empty()) {
        warm.push_back(MeanDelta(valid_cfs, model.space().size()));
      }
      result = RunMuPlusLambda(group, model, target, cfg, warm);
    } else {
      result = WarrenMaxCoverage(all_cfs, group, model, target, ea.weights);
    }
    GroupRecord rec;
    rec.method = method;
    rec.group = g;
    rec.noise_group = g >= clustered;
    rec.size = members.size();
    rec.valid = result.valid_count();
    rec.correctness = result.correctness;
    rec.cost = CostMetric(result.delta, model.space());
    rec.delta = std::move(result.delta);
    rec.members = members;
    rec.valid_bits = std::move(result.valid);
    rec.trace = std::move(result.trace);
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

LabeledData Subset(const LabeledData& data, std::span<const std::size_t> rows) {
  LabeledData out;
  out.space = data.space;
  for (std::size_t r : rows) {
    out.instances.push_back(data.instances[r]);
    out.labels.push_back(data.labels[r]);
  }
  return out;
}

void MeanVar(const std::vector<double>& v, double& mean, double& var) {
  mean = 0.0;
  var = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
}

Grouping AllInOne(std::size_t n) {
  Grouping g;
  g.groups.emplace_back(n);
  std::iota(g.groups[0].begin(), g.groups[0].end(), std::size_t{0});
  g.provenance = "none";
  return g;
}

}  // namespace

EvalReport RunBenchmark(const BenchmarkConfig& cfg, const LabeledData& data) {
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  report.space = data.space;
  report.config_json = BenchmarkConfigToJson(cfg);

  const int target = cfg.cf.target;
  const auto folds = MakeFolds(data.size(), cfg.folds, DeriveSeed(cfg.seed, 0));

  for (std::size_t f = 0; f < folds.size(); ++f) {
    FoldRecord fold;
    fold.fold = f;
    fold.seed = DeriveSeed(cfg.seed, f + 1);
    std::vector<std::size_t> train_rows;
    for (std::size_t o = 0; o < folds.size(); ++o) {
      if (o != f) train_rows.insert(train_rows.end(), folds[o].begin(), folds[o].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    const auto& test_rows = folds[f];
    fold.train_size = train_rows.size();
    fold.test_size = test_rows.size();

    TrainConfig tc = cfg.model;
    tc.seed = DeriveSeed(fold.seed, 0);
    const ModelPtr model = TrainModel(Subset(data, train_rows), tc);
    const LabeledData test = Subset(data, test_rows);
    fold.test_accuracy = Accuracy(*model, test);

    const auto predictions = PredictBatch(*model, test.instances);
    std::vector<Instance> explained;
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      if (predictions[i] != target) {
        explained.push_back(test.instances[i]);
        fold.explained_rows.push_back(test_rows[i]);
      }
    }
    fold.explained = explained.size();
    if (explained.empty()) {
      fold.skipped = true;
      report.folds.push_back(std::move(fold));
      continue;
    }

    CfRequest req = cfg.cf;
    req.seed = DeriveSeed(fold.seed, 1);
    const auto cfs = BatchCf(*model, explained, req, cfg.cf_method, cfg.threads);
    fold.cf_valid_rate =
        static_cast<double>(std::count_if(cfs.begin(), cfs.end(),
                                          [](const CfResult& r) { return r.valid; })) /
        static_cast<double>(cfs.size());

    for (Condition c : cfg.conditions) {
      Grouping grouping;
      if (c == Condition::kNone) {
        grouping = AllInOne(explained.size());
      } else if (c == Condition::kClusterInstances) {
        ClusterParams p = cfg.cluster_instances;
        p.seed = DeriveSeed(fold.seed, 2);
        grouping = GroupByInstances(data.space, explained, p);
      } else {
        ClusterParams p = cfg.cluster_cfs;
        p.seed = DeriveSeed(fold.seed, 2);
        grouping = GroupByCfDirections(data.space, cfs, p);
      }
      Require(grouping.IsPartitionOf(explained.size()),
              "grouping does not partition the explained set");
      for (Method m : cfg.methods) {
        auto recs = SolveGroups(*model, explained, cfs, grouping, m, cfg.ea,
                                target,
                                DeriveSeed(fold.seed, 3 + static_cast<std::uint64_t>(c)),
                                cfg.threads);
        for (auto& r : recs) {
          r.fold = f;
          r.condition = c;
          report.groups.push_back(std::move(r));
        }
      }
    }
    report.folds.push_back(std::move(fold));
  }

  for (Condition c : cfg.conditions) {
    for (Method m : cfg.methods) {
      std::vector<double> corr_w, corr_u, cost_u, cost_w;
      for (const auto& fold : report.folds) {
        if (fold.skipped) continue;
        std::size_t size = 0, valid = 0, groups = 0;
        double corr_sum = 0.0, cost_sum = 0.0, cost_wsum = 0.0;
        for (const auto& r : report.groups) {
          if (r.fold != fold.fold || r.condition != c || r.method != m) continue;
          size += r.size;
          valid += r.valid;
          ++groups;
          corr_sum += r.correctness;
          cost_sum += r.cost;
          cost_wsum += r.cost * static_cast<double>(r.size);
        }
        if (groups == 0) continue;
        corr_w.push_back(static_cast<double>(valid) / static_cast<double>(size));
        corr_u.push_back(corr_sum / static_cast<double>(groups));
        cost_u.push_back(cost_sum / static_cast<double>(groups));
        cost_w.push_back(cost_wsum / static_cast<double>(size));
      }
      Aggregate a;
      a.condition = c;
      a.method = m;
      a.folds = corr_w.size();
      MeanVar(corr_w, a.correctness_mean, a.correctness_var);
      MeanVar(corr_u, a.correctness_unweighted_mean, a.correctness_unweighted_var);
      MeanVar(cost_u, a.cost_mean, a.cost_var);
      MeanVar(cost_w, a.cost_weighted_mean, a.cost_weighted_var);
      report.aggregates.push_back(a);
    }
  }
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

EvalReport RunBenchmark(const BenchmarkConfig& cfg) {
  cfg.Validate();
  if (cfg.synthetic) {
    return RunBenchmark(cfg, MakeSynthetic(*cfg.synthetic, cfg.synthetic_n,
                                           DeriveSeed(cfg.seed, 0x5EED)));
  }
  return RunBenchmark(cfg, LoadDataset(cfg.data_path, LoadSchema(cfg.schema_path)));
}

namespace {

std::vector<Condition> ReportConditions(const EvalReport& r) {
  std::vector<Condition> out;
  for (const auto& a : r.aggregates) {
    if (std::find(out.begin(), out.end(), a.condition) == out.end()) {
      out.push_back(a.condition);
    }
  }
  return out;
}

std::vector<Method> ReportMethods(const EvalReport& r) {
  std::vector<Method> out;
  for (const auto& a : r.aggregates) {
    if (std::find(out.begin(), out.end(), a.method) == out.end()) {
      out.push_back(a.method);
    }
  }
  return out;
}

template <typename Cell>
std::string Table(const EvalReport& r, const std::string& title, Cell cell) {
  const auto conditions = ReportConditions(r);
  std::string out = "# " + title + "\n\n| Method |";
  for (Condition c : conditions) out += std::string(" ") + ConditionTitle(c) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < conditions.size(); ++i) out += "---|";
  out += "\n";
  for (Method m : ReportMethods(r)) {
    out += std::string("| ") + MethodTitle(m) + " |";
    for (Condition c : conditions) {
      const Aggregate* a = r.Find(c, m);
      out += " " + (a == nullptr || a->folds == 0 ? std::string("n/a") : cell(*a)) + " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::string CorrectnessTable(const EvalReport& report) {
  return Table(report, "Correctness", [](const Aggregate& a) {
    return FormatMeanVariance(a.correctness_mean, a.correctness_var);
  });
}

std::string CostTable(const EvalReport& report) {
  return Table(report, "Cost (fraction of changed features)", [](const Aggregate& a) {
    return FormatMeanVariance(a.cost_mean, a.cost_var);
  });
}

namespace {

constexpr const char* kSummaryHeader =
    "condition,method,folds,correctness_mean,correctness_var,"
    "correctness_unweighted_mean,correctness_unweighted_var,cost_mean,cost_var,"
    "cost_weighted_mean,cost_weighted_var";

}  // namespace

std::string SummaryCsv(const EvalReport& report) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& a : report.aggregates) {
    out += std::string(ConditionName(a.condition)) + "," + MethodName(a.method) +
           "," + std::to_string(a.folds) + "," + FormatDouble(a.correctness_mean) +
           "," + FormatDouble(a.correctness_var) + "," +
           FormatDouble(a.correctness_unweighted_mean) + "," +
           FormatDouble(a.correctness_unweighted_var) + "," +
           FormatDouble(a.cost_mean) + "," + FormatDouble(a.cost_var) + "," +
           FormatDouble(a.cost_weighted_mean) + "," +
           FormatDouble(a.cost_weighted_var) + "\n";
  }
  return out;
}

std::vector<Aggregate> ParseSummaryCsv(std::string_view csv) {
  const auto rows = ParseCsv(csv);
  if (rows.empty()) Fail(ErrorCode::kParse, "empty summary CSV");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    header += (i ? "," : "") + rows[0][i];
  }
  if (header != kSummaryHeader) Fail(ErrorCode::kParse, "unexpected summary CSV header");
  std::vector<Aggregate> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 11) {
      Fail(ErrorCode::kParse, "row " + std::to_string(r) + ": expected 11 fields");
    }
    auto num = [&](std::size_t c) {
      auto v = internal::ParseDouble(row[c]);
      if (!v) {
        Fail(ErrorCode::kParse, "row " + std::to_string(r) + ": bad number '" +
                                    row[c] + "'");
      }
      return *v;
    };
    Aggregate a;
    a.condition = ParseCondition(row[0]);
    a.method = ParseMethod(row[1]);
    a.folds = static_cast<std::size_t>(num(2));
    a.correctness_mean = num(3);
    a.correctness_var = num(4);
    a.correctness_unweighted_mean = num(5);
    a.correctness_unweighted_var = num(6);
    a.cost_mean = num(7);
    a.cost_var = num(8);
    a.cost_weighted_mean = num(9);
    a.cost_weighted_var = num(10);
    out.push_back(a);
  }
  return out;
}

std::string GroupsCsv(const EvalReport& report) {
  std::string out =
      "fold,condition,method,group,noise_group,size,valid,correctness,cost,members\n";
  for (const auto& g : report.groups) {
    const auto& rows = report.folds.at(g.fold).explained_rows;
    std::string members;
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      members += (i ? " " : "") + std::to_string(rows.at(g.members[i]));
    }
    out += std::to_string(g.fold) + "," + ConditionName(g.condition) + "," +
           MethodName(g.method) + "," + std::to_string(g.group) + "," +
           (g.noise_group ? "1" : "0") + "," + std::to_string(g.size) + "," +
           std::to_string(g.valid) + "," + FormatDouble(g.correctness) + "," +
           FormatDouble(g.cost) + "," + members + "\n";
  }
  return out;
}

namespace {

std::string FoldsCsv(const EvalReport& report) {
  std::string out =
      "fold,seed,skipped,train_size,test_size,explained,test_accuracy,cf_valid_rate\n";
  for (const auto& f : report.folds) {
    out += std::to_string(f.fold) + "," + std::to_string(f.seed) + "," +
           (f.skipped ? "1" : "0") + "," + std::to_string(f.train_size) + "," +
           std::to_string(f.test_size) + "," + std::to_string(f.explained) + "," +
           FormatDouble(f.test_accuracy) + "," + FormatDouble(f.cf_valid_rate) + "\n";
  }
  return out;
}

std::string CfsJsonl(const EvalReport& report) {
  std::string out;
  for (const auto& g : report.groups) {
    const auto& rows = report.folds.at(g.fold).explained_rows;
    ordered_json j;
    j["fold"] = g.fold;
    j["condition"] = ConditionName(g.condition);
    j["method"] = MethodName(g.method);
    j["group"] = g.group;
    j["noise_group"] = g.noise_group;
    j["delta"] = internal::DeltaToJson(report.space, g.delta);
    ordered_json members = ordered_json::array();
    for (std::size_t m : g.members) members.push_back(rows.at(m));
    j["members"] = std::move(members);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

std::vector<std::string> EmitReport(const EvalReport& report,
                                    const std::string& dir,
                                    std::span<const ReportFormat> formats) {
  const auto wants = [&](ReportFormat f) {
    return formats.empty() ||
           std::find(formats.begin(), formats.end(), f) != formats.end();
  };
  std::vector<std::pair<std::string, std::string>> files;
  if (wants(ReportFormat::kMarkdown)) {
    files.emplace_back("correctness.md", CorrectnessTable(report));
    files.emplace_back("cost.md", CostTable(report));
  }
  if (wants(ReportFormat::kCsv)) {
    files.emplace_back("summary.csv", SummaryCsv(report));
    files.emplace_back("groups.csv", GroupsCsv(report));
    files.emplace_back("folds.csv", FoldsCsv(report));
    files.emplace_back("cfs.jsonl", CfsJsonl(report));
  }

  ordered_json manifest;
  manifest["format"] = "groupcf.manifest";
  manifest["version"] = kManifestFormatVersion;
  manifest["tool_version"] = kVersion;
  manifest["formats"] = {{"model", kModelFormatVersion},
                         {"grouping", kGroupingFormatVersion},
                         {"schema", kSchemaFormatVersion},
                         {"bench", kBenchConfigFormatVersion}};
  manifest["config"] = internal::ParseJson(report.config_json, "config");
  manifest["space"] = internal::SpaceToJson(report.space);
  ordered_json folds = ordered_json::array();
  for (const auto& f : report.folds) {
    folds.push_back({{"fold", f.fold},
                     {"seed", f.seed},
                     {"skipped", f.skipped},
                     {"explained", f.explained}});
  }
  manifest["folds"] = std::move(folds);
  ordered_json artifacts = ordered_json::array();
  for (const auto& [name, text] : files) artifacts.push_back(name);
  manifest["artifacts"] = std::move(artifacts);
  files.emplace_back("manifest.json", manifest.dump(1) + "\n");

  std::vector<std::string> names;
  for (const auto& [name, text] : files) {
    internal::WriteTextFile((std::filesystem::path(dir) / name).string(), text);
    names.push_back(name);
  }
  return names;
}

}  // namespace groupcf
