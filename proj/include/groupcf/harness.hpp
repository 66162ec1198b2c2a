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

// Evaluation harness: dataset ingestion, synthetic data, k-fold
// cross-validation over clustering conditions and multi-instance methods,
// correctness/cost metrics, and report emission.

#ifndef GROUPCF_HARNESS_HPP_
#define GROUPCF_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groupcf/cf_single.hpp"
#include "groupcf/core.hpp"
#include "groupcf/grouping.hpp"
#include "groupcf/models.hpp"
#include "groupcf/multi_cf.hpp"

namespace groupcf {

// ---------------------------------------------------------------------------
// Datasets

enum class ColumnRole : std::uint8_t { kFeature, kLabel, kIgnore };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kFeature;
  FeatureKind kind = FeatureKind::kNumeric;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> categories;
  bool actionable = true;
};

struct DatasetSchema {
  std::vector<ColumnSpec> columns;
  // Label value treated as the positive class (label index 1). The other
  // label value is the negative class.
  std::string positive_label;

  // Throws unless there is exactly one label column with two values, one
  // of which is positive_label.
  void Validate() const;
  FeatureSpace ToFeatureSpace() const;
};

inline constexpr int kSchemaFormatVersion = 1;

DatasetSchema ParseSchema(std::string_view json);
DatasetSchema LoadSchema(const std::string& path);
std::string SerializeSchema(const DatasetSchema& schema);
// Schema whose columns are the space's features followed by a label column.
DatasetSchema SchemaFromSpace(const FeatureSpace& space,
                              const std::string& label_column = "label");

// RFC 4180 subset: comma separated, double-quoted fields, "" escapes.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// Every header column must be named in the schema and every schema column
// must appear. Errors name the 1-based data row and the column.
LabeledData ParseDataset(std::string_view csv, const DatasetSchema& schema);
LabeledData LoadDataset(const std::string& csv_path,
                        const DatasetSchema& schema);

// Rows of instances against a known space (no label column required);
// columns not in the space are ignored.
std::vector<Instance> ParseInstances(std::string_view csv,
                                     const FeatureSpace& space);

std::string DatasetToCsv(const LabeledData& data,
                         const std::string& label_column = "label");

// ---------------------------------------------------------------------------
// Synthetic data

enum class SyntheticKind : std::uint8_t { kBlobs, kXor, kBundles };

const char* SyntheticKindName(SyntheticKind kind);
SyntheticKind ParseSyntheticKind(std::string_view name);

// Layouts (all numeric features lie in [0, 10]):
//  blobs   - two isotropic Gaussian blobs centred at 5 -/+ separation/2 along
//            the diagonal of `dims` features, clamped to the domain.
//  xor     - two features uniform in [0, 10]; positive iff exactly one of
//            them exceeds 5.
//  bundles - `bundles` direction features b_k plus `noise_features`
//            uninformative ones; positive iff max_k b_k > 7. Negatives come
//            in `bundles` sub-populations, the k-th sitting just below the
//            threshold on b_k (b_k ~ U(5, 6.6)) and low elsewhere
//            (b_j ~ U(1, 3)), so each sub-population flips along its own
//            feature. Positives raise one b_k to U(7.4, 9.5).
// `categorical_features` appends uninformative categorical columns with
// three categories each.
struct SyntheticLayout {
  SyntheticKind kind = SyntheticKind::kBundles;
  std::size_t dims = 2;
  double separation = 6.0;
  std::size_t bundles = 4;
  std::size_t noise_features = 2;
  std::size_t categorical_features = 0;
};

SyntheticLayout ParseSyntheticLayout(std::string_view json);

LabeledData MakeSynthetic(const SyntheticLayout& layout, std::size_t n,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Metrics

// Pooled fraction of instances whose prediction under their group's delta
// equals target; infeasible applications count as incorrect. Equals the
// size-weighted mean of per-group correctness.
double CorrectnessMetric(const Model& model, std::span<const Instance> xs,
                         const std::vector<std::vector<std::size_t>>& groups,
                         std::span<const Delta> deltas, int target);

// Fraction of changed features, in [0, 1].
double CostMetric(const Delta& d, const FeatureSpace& space);

// "mean ± variance" with both rounded to two decimals and printed with the
// shortest representation keeping at least one decimal ("0.98 ± 0.0").
std::string FormatMeanVariance(double mean, double variance);

// Folds of a shuffled [0, n): fold f holds shuffled positions f, f+k, ...
// Disjoint, covering, sizes differ by at most one.
std::vector<std::vector<std::size_t>> MakeFolds(std::size_t n, std::size_t k,
                                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Benchmark

enum class Condition : std::uint8_t { kNone, kClusterInstances, kClusterCfs };
enum class Method : std::uint8_t { kEa, kWarren };

const char* ConditionName(Condition c);
const char* ConditionTitle(Condition c);
Condition ParseCondition(std::string_view name);
const char* MethodName(Method m);
const char* MethodTitle(Method m);
Method ParseMethod(std::string_view name);

struct BenchmarkConfig {
  // Either a CSV dataset with its schema or a synthetic layout.
  std::string data_path;
  std::string schema_path;
  std::optional<SyntheticLayout> synthetic;
  std::size_t synthetic_n = 400;

  TrainConfig model;
  CfRequest cf;
  CfMethod cf_method = CfMethod::kAuto;
  ClusterParams cluster_instances;
  ClusterParams cluster_cfs;
  EaConfig ea;
  std::size_t folds = 5;
  std::vector<Method> methods{Method::kEa, Method::kWarren};
  std::vector<Condition> conditions{Condition::kNone,
                                    Condition::kClusterInstances,
                                    Condition::kClusterCfs};
  std::string output_dir = "bench_out";
  std::uint64_t seed = 0;
  int threads = 1;

  void Validate() const;
};

inline constexpr int kBenchConfigFormatVersion = 1;

// Relative data/schema paths are resolved against base_dir when given.
BenchmarkConfig ParseBenchmarkConfig(std::string_view json,
                                     const std::string& base_dir = "");
BenchmarkConfig LoadBenchmarkConfig(const std::string& path);
// Canonical JSON of the effective settings (excludes thread count).
std::string BenchmarkConfigToJson(const BenchmarkConfig& cfg);

struct GroupRecord {
  std::size_t fold = 0;
  Condition condition = Condition::kNone;
  Method method = Method::kEa;
  std::size_t group = 0;
  bool noise_group = false;
  std::size_t size = 0;
  std::size_t valid = 0;
  double correctness = 0.0;
  // CostMetric of the delta.
  double cost = 0.0;
  Delta delta;
  // Indices into the fold's explained set.
  std::vector<std::size_t> members;
  // Per-member validity, in members order.
  std::vector<bool> valid_bits;
  // Best fitness per generation (EA only).
  std::vector<double> trace;
};

struct FoldRecord {
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  // |D|: test instances predicted negative.
  std::size_t explained = 0;
  double test_accuracy = 0.0;
  // Fraction of valid individual counterfactuals over D.
  double cf_valid_rate = 0.0;
  // Test-set row indices (into the full dataset) of D, in order.
  std::vector<std::size_t> explained_rows;
};

struct Aggregate {
  Condition condition = Condition::kNone;
  Method method = Method::kEa;
  std::size_t folds = 0;
  // Over folds of the pooled (size-weighted) per-fold correctness.
  double correctness_mean = 0.0;
  double correctness_var = 0.0;
  // Over folds of the unweighted per-fold mean of group correctness.
  double correctness_unweighted_mean = 0.0;
  double correctness_unweighted_var = 0.0;
  // Over folds of the unweighted per-fold mean of group cost.
  double cost_mean = 0.0;
  double cost_var = 0.0;
  // Over folds of the size-weighted per-fold mean of group cost.
  double cost_weighted_mean = 0.0;
  double cost_weighted_var = 0.0;
};

struct EvalReport {
  FeatureSpace space;
  std::string config_json;
  std::vector<FoldRecord> folds;
  std::vector<GroupRecord> groups;
  std::vector<Aggregate> aggregates;
  // Wall-clock seconds; informational and never written to artifacts.
  double seconds = 0.0;

  const Aggregate* Find(Condition c, Method m) const;
};

// Solves one multi-instance counterfactual per group and per DBSCAN noise
// set (the noise set becomes one extra group). `cfs` are the individual
// counterfactuals of xs, used as warm start (EA) or candidates (Warren).
// EA seeds are DeriveSeed(seed, group index).
std::vector<GroupRecord> SolveGroups(const Model& model,
                                     std::span<const Instance> xs,
                                     std::span<const CfResult> cfs,
                                     const Grouping& grouping, Method method,
                                     const EaConfig& ea, int target,
                                     std::uint64_t seed, int threads);

// Full cross-validated protocol on an already loaded dataset.
EvalReport RunBenchmark(const BenchmarkConfig& cfg, const LabeledData& data);
// Loads or generates the dataset named by cfg.
EvalReport RunBenchmark(const BenchmarkConfig& cfg);

enum class ReportFormat : std::uint8_t { kCsv, kMarkdown };

// Writes into dir: correctness.md and cost.md (rounded tables, methods x
// conditions), summary.csv (unrounded aggregates), groups.csv (per-group
// raw values), folds.csv, cfs.jsonl (per-group deltas) and manifest.json.
// Returns the written file names.
std::vector<std::string> EmitReport(const EvalReport& report,
                                    const std::string& dir,
                                    std::span<const ReportFormat> formats = {});

std::string CorrectnessTable(const EvalReport& report);
std::string CostTable(const EvalReport& report);
std::string SummaryCsv(const EvalReport& report);
std::string GroupsCsv(const EvalReport& report);

// Parses summary.csv back into aggregates.
std::vector<Aggregate> ParseSummaryCsv(std::string_view csv);

}  // namespace groupcf

#endif  // GROUPCF_HARNESS_HPP_
