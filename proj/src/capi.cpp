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

#include "groupcf/groupcf.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>

#include "groupcf/artifacts.hpp"
#include "groupcf/config.hpp"
#include "groupcf/error.hpp"
#include "groupcf/harness.hpp"
#include "groupcf/version.hpp"
#include "json_io.hpp"

struct gcf_dataset {
  groupcf::LabeledData data;
};

struct gcf_model {
  groupcf::ModelPtr model;
};

namespace {

thread_local std::string g_last_error;

gcf_status SetError(gcf_status status, std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
gcf_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return GCF_OK;
  } catch (const groupcf::Error& e) {
    return SetError(static_cast<gcf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(GCF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(GCF_ERR_INTERNAL, e.what());
  } catch (...) {
    return SetError(GCF_ERR_INTERNAL, "unknown failure");
  }
}

std::string Str(const char* s) { return s == nullptr ? std::string() : std::string(s); }

void RequireArg(const void* p, const char* name) {
  groupcf::Require(p != nullptr, std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* gcf_version(void) { return groupcf::kVersion; }

int gcf_format_version(const char* artifact) {
  const std::string a = Str(artifact);
  if (a == "model") return groupcf::kModelFormatVersion;
  if (a == "grouping") return groupcf::kGroupingFormatVersion;
  if (a == "schema") return groupcf::kSchemaFormatVersion;
  if (a == "bench") return groupcf::kBenchConfigFormatVersion;
  if (a == "cfs") return groupcf::kCfBatchFormatVersion;
  if (a == "multicf") return groupcf::kMultiCfFormatVersion;
  if (a == "manifest") return groupcf::kManifestFormatVersion;
  return -1;
}

const char* gcf_status_name(gcf_status status) {
  if (status == GCF_OK) return "ok";
  return groupcf::ErrorCodeName(static_cast<groupcf::ErrorCode>(status));
}

const char* gcf_last_error(void) { return g_last_error.c_str(); }

void gcf_string_free(char* s) { delete[] s; }

gcf_status gcf_dataset_load(const char* csv_path, const char* schema_path,
                            gcf_dataset** out) {
  return Guard([&] {
    RequireArg(csv_path, "csv_path");
    RequireArg(schema_path, "schema_path");
    RequireArg(out, "out");
    auto data = groupcf::LoadDataset(csv_path, groupcf::LoadSchema(schema_path));
    *out = new gcf_dataset{std::move(data)};
  });
}

gcf_status gcf_dataset_synthetic(const char* layout_json, size_t n,
                                 uint64_t seed, gcf_dataset** out) {
  return Guard([&] {
    RequireArg(out, "out");
    const auto layout = groupcf::ParseSyntheticLayout(Str(layout_json));
    *out = new gcf_dataset{groupcf::MakeSynthetic(layout, n, seed)};
  });
}

gcf_status gcf_dataset_write(const gcf_dataset* data, const char* csv_path,
                             const char* schema_path) {
  return Guard([&] {
    RequireArg(data, "data");
    RequireArg(csv_path, "csv_path");
    groupcf::internal::WriteTextFile(csv_path, groupcf::DatasetToCsv(data->data));
    if (schema_path != nullptr) {
      groupcf::internal::WriteTextFile(
          schema_path,
          groupcf::SerializeSchema(groupcf::SchemaFromSpace(data->data.space)));
    }
  });
}

size_t gcf_dataset_rows(const gcf_dataset* data) {
  return data == nullptr ? 0 : data->data.size();
}

size_t gcf_dataset_features(const gcf_dataset* data) {
  return data == nullptr ? 0 : data->data.space.size();
}

void gcf_dataset_free(gcf_dataset* data) { delete data; }

gcf_status gcf_model_train(const gcf_dataset* data, const char* config_json,
                           gcf_model** out) {
  return Guard([&] {
    RequireArg(data, "data");
    RequireArg(out, "out");
    const auto cfg = groupcf::ParseTrainConfig(Str(config_json));
    *out = new gcf_model{groupcf::TrainModel(data->data, cfg)};
  });
}

gcf_status gcf_model_save(const gcf_model* model, const char* path) {
  return Guard([&] {
    RequireArg(model, "model");
    RequireArg(path, "path");
    groupcf::SaveModel(*model->model, path);
  });
}

gcf_status gcf_model_load(const char* path, gcf_model** out) {
  return Guard([&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = new gcf_model{groupcf::LoadModel(path)};
  });
}

gcf_status gcf_model_accuracy(const gcf_model* model, const gcf_dataset* data,
                              double* out) {
  return Guard([&] {
    RequireArg(model, "model");
    RequireArg(data, "data");
    RequireArg(out, "out");
    groupcf::Require(model->model->space() == data->data.space,
                     "dataset does not match the model's feature space");
    *out = groupcf::Accuracy(*model->model, data->data);
  });
}

void gcf_model_free(gcf_model* model) { delete model; }

gcf_status gcf_explain(const gcf_model* model, const char* instances_csv,
                       const char* request_json, const char* method,
                       int threads, const char* out_path, size_t* valid,
                       size_t* total) {
  return Guard([&] {
    RequireArg(model, "model");
    RequireArg(instances_csv, "instances_csv");
    RequireArg(out_path, "out_path");
    const groupcf::Model& m = *model->model;
    groupcf::CfBatch batch;
    batch.space = m.space();
    batch.instances = groupcf::ParseInstances(
        groupcf::internal::ReadTextFile(instances_csv), batch.space);
    groupcf::Require(!batch.instances.empty(), "no instances to explain");
    const auto req = groupcf::ParseCfRequest(Str(request_json));
    const auto how = groupcf::ParseCfMethod(method == nullptr ? "auto" : method);
    batch.target = req.target;
    batch.method = groupcf::CfMethodName(how);
    batch.results = groupcf::BatchCf(m, batch.instances, req, how, threads < 1 ? 1 : threads);
    groupcf::internal::WriteTextFile(out_path, groupcf::SerializeCfBatch(batch));
    size_t ok = 0;
    for (const auto& r : batch.results) ok += r.valid ? 1 : 0;
    if (valid != nullptr) *valid = ok;
    if (total != nullptr) *total = batch.results.size();
  });
}

gcf_status gcf_group(const char* cfs_path, const char* params_json,
                     const char* out_path, size_t* groups, size_t* noise) {
  return Guard([&] {
    RequireArg(cfs_path, "cfs_path");
    RequireArg(out_path, "out_path");
    const auto batch =
        groupcf::DeserializeCfBatch(groupcf::internal::ReadTextFile(cfs_path));
    const auto params = groupcf::ParseClusterParams(Str(params_json));
    const groupcf::Grouping g =
        params.strategy == groupcf::ClusterStrategy::kDbscanInstances
            ? groupcf::GroupByInstances(batch.space, batch.instances, params)
            : groupcf::GroupByCfDirections(batch.space, batch.results, params);
    groupcf::internal::WriteTextFile(
        out_path, groupcf::SerializeGrouping(g, batch.instances.size()));
    if (groups != nullptr) *groups = g.groups.size();
    if (noise != nullptr) *noise = g.noise.size();
  });
}

gcf_status gcf_multicf(const gcf_model* model, const char* cfs_path,
                       const char* grouping_path, const char* method,
                       const char* ea_json, int threads, const char* out_path,
                       double* correctness) {
  return Guard([&] {
    RequireArg(model, "model");
    RequireArg(cfs_path, "cfs_path");
    RequireArg(grouping_path, "grouping_path");
    RequireArg(out_path, "out_path");
    const groupcf::Model& m = *model->model;
    const auto batch =
        groupcf::DeserializeCfBatch(groupcf::internal::ReadTextFile(cfs_path));
    groupcf::Require(batch.space == m.space(),
                     "counterfactual file does not match the model's feature space");
    const auto grouping = groupcf::DeserializeGrouping(
        groupcf::internal::ReadTextFile(grouping_path));
    groupcf::Require(grouping.IsPartitionOf(batch.instances.size()),
                     "grouping does not partition the counterfactual file");
    const auto ea = groupcf::ParseEaConfig(Str(ea_json));
    const auto how = groupcf::ParseMethod(method == nullptr ? "ea" : method);

    groupcf::MultiCfSolution sol;
    sol.space = m.space();
    sol.target = batch.target;
    sol.method = groupcf::MethodName(how);
    sol.groups = groupcf::SolveGroups(m, batch.instances, batch.results, grouping,
                                      how, ea, batch.target, ea.seed,
                                      threads < 1 ? 1 : threads);
    size_t size = 0, ok = 0;
    for (const auto& r : sol.groups) {
      size += r.size;
      ok += r.valid;
    }
    sol.correctness = size == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(size);
    groupcf::internal::WriteTextFile(out_path, groupcf::SerializeMultiCf(sol));
    if (correctness != nullptr) *correctness = sol.correctness;
  });
}

gcf_status gcf_bench(const char* config_path, const char* output_dir,
                     int threads, int override_seed, uint64_t seed,
                     char** tables) {
  return Guard([&] {
    RequireArg(config_path, "config_path");
    auto cfg = groupcf::LoadBenchmarkConfig(config_path);
    if (output_dir != nullptr) cfg.output_dir = output_dir;
    if (threads > 0) cfg.threads = threads;
    if (override_seed != 0) cfg.seed = seed;
    const auto report = groupcf::RunBenchmark(cfg);
    groupcf::EmitReport(report, cfg.output_dir);
    if (tables != nullptr) {
      const std::string text =
          groupcf::CorrectnessTable(report) + "\n" + groupcf::CostTable(report);
      char* buf = new char[text.size() + 1];
      std::memcpy(buf, text.c_str(), text.size() + 1);
      *tables = buf;
    }
  });
}

gcf_status gcf_write_manifest(const char* path, const char* command,
                              const char* const* keys,
                              const char* const* values, size_t count) {
  return Guard([&] {
    RequireArg(path, "path");
    groupcf::Require(count == 0 || (keys != nullptr && values != nullptr),
                     "keys and values must not be NULL");
    groupcf::internal::ordered_json j;
    j["format"] = "groupcf.manifest";
    j["version"] = groupcf::kManifestFormatVersion;
    j["tool_version"] = groupcf::kVersion;
    j["formats"] = {{"model", groupcf::kModelFormatVersion},
                    {"grouping", groupcf::kGroupingFormatVersion},
                    {"schema", groupcf::kSchemaFormatVersion},
                    {"bench", groupcf::kBenchConfigFormatVersion},
                    {"cfs", groupcf::kCfBatchFormatVersion},
                    {"multicf", groupcf::kMultiCfFormatVersion}};
    j["command"] = Str(command);
    groupcf::internal::ordered_json settings = groupcf::internal::ordered_json::object();
    for (size_t i = 0; i < count; ++i) {
      RequireArg(keys[i], "key");
      settings[keys[i]] = Str(values[i]);
    }
    j["settings"] = std::move(settings);
    groupcf::internal::WriteTextFile(path, j.dump(1) + "\n");
  });
}

}  // extern "C"
