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

// Command-line front end over the C interface.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groupcf/groupcf.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure {
  std::string code;
  std::string message;
};

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int verbosity = 0;
  std::string output = ".";
  bool output_given = false;
  int threads = 1;
};

void Check(gcf_status status) {
  if (status != GCF_OK) throw RuntimeFailure{gcf_status_name(status), gcf_last_error()};
}

std::string OneLine(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure{"io", "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json ReadJsonObject(const std::string& path) {
  if (path.empty()) return Json::object();
  try {
    Json j = Json::parse(ReadFile(path));
    if (!j.is_object()) throw RuntimeFailure{"parse", path + ": expected a JSON object"};
    return j;
  } catch (const Json::parse_error& e) {
    throw RuntimeFailure{"parse", path + ": " + e.what()};
  }
}

std::string OutPath(const Globals& g, const std::string& name) {
  return (std::filesystem::path(g.output) / name).string();
}

class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void Add(std::string key, std::string value) {
    keys_.push_back(std::move(key));
    values_.push_back(std::move(value));
  }

  void Write(const Globals& g, int verbosity) const {
    std::vector<const char*> k, v;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      k.push_back(keys_[i].c_str());
      v.push_back(values_[i].c_str());
      if (verbosity > 0) std::cerr << keys_[i] << " = " << values_[i] << "\n";
    }
    const std::string path = OutPath(g, command_ + ".manifest.json");
    Check(gcf_write_manifest(path.c_str(), command_.c_str(), k.data(), v.data(),
                             k.size()));
  }

 private:
  std::string command_;
  std::vector<std::string> keys_;
  std::vector<std::string> values_;
};

struct TrainArgs {
  std::string data, schema, config, kind;
  std::string synthetic;
  std::size_t n = 400;
};

void RunTrain(const Globals& g, const TrainArgs& a) {
  Json cfg = ReadJsonObject(a.config);
  if (!a.kind.empty()) cfg["kind"] = a.kind;
  if (g.seed_given) cfg["seed"] = g.seed;
  gcf_dataset* data = nullptr;
  if (!a.synthetic.empty()) {
    const std::string layout = Json{{"kind", a.synthetic}}.dump();
    Check(gcf_dataset_synthetic(layout.c_str(), a.n, g.seed, &data));
  } else {
    Check(gcf_dataset_load(a.data.c_str(), a.schema.c_str(), &data));
  }
  gcf_model* model = nullptr;
  const std::string cfg_text = cfg.dump();
  const gcf_status st = gcf_model_train(data, cfg_text.c_str(), &model);
  double accuracy = 0.0;
  const std::string path = OutPath(g, "model.json");
  gcf_status st2 = st;
  if (st == GCF_OK) st2 = gcf_model_accuracy(model, data, &accuracy);
  if (st2 == GCF_OK) st2 = gcf_model_save(model, path.c_str());
  gcf_model_free(model);
  gcf_dataset_free(data);
  Check(st2);
  std::cout << "model " << path << " training_accuracy " << accuracy << "\n";
  Manifest m("train");
  m.Add("data", a.synthetic.empty() ? a.data : "synthetic:" + a.synthetic);
  m.Add("schema", a.schema);
  m.Add("model_config", cfg_text);
  m.Add("seed", std::to_string(g.seed));
  m.Add("output", path);
  m.Write(g, g.verbosity);
}

struct ExplainArgs {
  std::string model, instance, method = "auto", request;
  int target = 1;
};

void RunExplain(const Globals& g, const ExplainArgs& a) {
  Json req = ReadJsonObject(a.request);
  req["target"] = a.target;
  if (g.seed_given) req["seed"] = g.seed;
  gcf_model* model = nullptr;
  Check(gcf_model_load(a.model.c_str(), &model));
  const std::string path = OutPath(g, "cfs.json");
  const std::string req_text = req.dump();
  std::size_t valid = 0, total = 0;
  const gcf_status st = gcf_explain(model, a.instance.c_str(), req_text.c_str(),
                                    a.method.c_str(), g.threads, path.c_str(),
                                    &valid, &total);
  gcf_model_free(model);
  Check(st);
  std::cout << "cfs " << path << " valid " << valid << "/" << total << "\n";
  Manifest m("explain");
  m.Add("model", a.model);
  m.Add("instances", a.instance);
  m.Add("method", a.method);
  m.Add("request", req_text);
  m.Add("threads", std::to_string(g.threads));
  m.Add("output", path);
  m.Write(g, g.verbosity);
}

struct GroupArgs {
  std::string cfs, strategy, params;
  double eps = -1.0;
  long min_pts = -1;
};

void RunGroup(const Globals& g, const GroupArgs& a) {
  Json params = ReadJsonObject(a.params);
  if (!a.strategy.empty()) params["strategy"] = a.strategy;
  if (a.eps >= 0.0) params["eps"] = a.eps;
  if (a.min_pts >= 0) params["min_pts"] = a.min_pts;
  if (g.seed_given) params["seed"] = g.seed;
  const std::string path = OutPath(g, "grouping.json");
  const std::string text = params.dump();
  std::size_t groups = 0, noise = 0;
  Check(gcf_group(a.cfs.c_str(), text.c_str(), path.c_str(), &groups, &noise));
  std::cout << "grouping " << path << " groups " << groups << " noise " << noise << "\n";
  Manifest m("group");
  m.Add("cfs", a.cfs);
  m.Add("params", text);
  m.Add("output", path);
  m.Write(g, g.verbosity);
}

struct MultiCfArgs {
  std::string model, cfs, grouping, method = "ea", ea;
};

void RunMultiCf(const Globals& g, const MultiCfArgs& a) {
  Json ea = ReadJsonObject(a.ea);
  if (g.seed_given) ea["seed"] = g.seed;
  gcf_model* model = nullptr;
  Check(gcf_model_load(a.model.c_str(), &model));
  const std::string path = OutPath(g, "multicf.json");
  const std::string text = ea.dump();
  double correctness = 0.0;
  const gcf_status st =
      gcf_multicf(model, a.cfs.c_str(), a.grouping.c_str(), a.method.c_str(),
                  text.c_str(), g.threads, path.c_str(), &correctness);
  gcf_model_free(model);
  Check(st);
  std::cout << "multicf " << path << " correctness " << correctness << "\n";
  Manifest m("multicf");
  m.Add("model", a.model);
  m.Add("cfs", a.cfs);
  m.Add("grouping", a.grouping);
  m.Add("method", a.method);
  m.Add("ea", text);
  m.Add("threads", std::to_string(g.threads));
  m.Add("output", path);
  m.Write(g, g.verbosity);
}

void RunBench(const Globals& g, const std::string& config) {
  char* tables = nullptr;
  Check(gcf_bench(config.c_str(), g.output_given ? g.output.c_str() : nullptr,
                  g.threads, g.seed_given ? 1 : 0, g.seed, &tables));
  std::cout << tables;
  gcf_string_free(tables);
}

struct SynthArgs {
  std::string layout = "bundles", layout_file;
  std::size_t n = 400;
};

void RunSynth(const Globals& g, const SynthArgs& a) {
  Json layout = ReadJsonObject(a.layout_file);
  if (!layout.contains("kind")) layout["kind"] = a.layout;
  const std::string text = layout.dump();
  gcf_dataset* data = nullptr;
  Check(gcf_dataset_synthetic(text.c_str(), a.n, g.seed, &data));
  const std::string csv = OutPath(g, "data.csv");
  const std::string schema = OutPath(g, "schema.json");
  const gcf_status st = gcf_dataset_write(data, csv.c_str(), schema.c_str());
  gcf_dataset_free(data);
  Check(st);
  std::cout << "data " << csv << " schema " << schema << "\n";
  Manifest m("synth");
  m.Add("layout", text);
  m.Add("n", std::to_string(a.n));
  m.Add("seed", std::to_string(g.seed));
  m.Add("output", csv);
  m.Write(g, g.verbosity);
}

std::string VersionText() {
  std::string s = std::string("groupcf ") + gcf_version() + " (formats:";
  for (const char* f : {"model", "grouping", "schema", "bench", "cfs", "multicf",
                        "manifest"}) {
    s += std::string(" ") + f + "=" + std::to_string(gcf_format_version(f));
  }
  return s + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-instance counterfactual explanations"};
  app.name("groupcf");
  app.require_subcommand(1);
  app.set_version_flag("--version", VersionText());

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for the command's randomness")
                       ->capture_default_str();
  app.add_flag("-v,--verbosity", g.verbosity, "Print effective settings (repeatable)");
  auto* out_opt =
      app.add_option("-o,--output", g.output, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.fallthrough();

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train a classifier");
  auto* data_opt = c_train->add_option("--data", train.data, "CSV data file");
  c_train->add_option("--schema", train.schema, "Schema file")->needs(data_opt);
  data_opt->needs(c_train->get_option("--schema"));
  auto* syn_opt = c_train->add_option("--synthetic", train.synthetic,
                                      "Train on a synthetic layout (blobs|xor|bundles)")
                      ->excludes(data_opt);
  c_train->add_option("--n", train.n, "Synthetic size")->needs(syn_opt)->capture_default_str();
  c_train->add_option("--config", train.config, "Model config file (JSON)");
  c_train->add_option("--kind", train.kind, "linear|tree_ensemble");

  ExplainArgs explain;
  auto* c_explain = app.add_subcommand("explain", "Individual counterfactuals");
  c_explain->add_option("--model", explain.model, "Model file")->required();
  c_explain->add_option("--instance", explain.instance, "CSV of instances")->required();
  c_explain->add_option("--target", explain.target, "Target label index")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
  c_explain->add_option("--method", explain.method, "auto|closed-form|search")
      ->capture_default_str();
  c_explain->add_option("--request", explain.request, "CF request file (JSON)");

  GroupArgs group;
  auto* c_group = app.add_subcommand("group", "Group counterfactuals");
  c_group->add_option("--cfs", group.cfs, "Counterfactual file")->required();
  c_group->add_option("--strategy", group.strategy,
                      "dbscan-cf-direction|dbscan-instances|kmedoids-cf-direction");
  c_group->add_option("--eps", group.eps, "DBSCAN radius");
  c_group->add_option("--min-pts", group.min_pts, "DBSCAN density threshold");
  c_group->add_option("--params", group.params, "Clustering params file (JSON)");

  MultiCfArgs multicf;
  auto* c_multi = app.add_subcommand("multicf", "One counterfactual per group");
  c_multi->add_option("--model", multicf.model, "Model file")->required();
  c_multi->add_option("--cfs", multicf.cfs, "Counterfactual file")->required();
  c_multi->add_option("--grouping", multicf.grouping, "Grouping file")->required();
  c_multi->add_option("--method", multicf.method, "ea|warren")->capture_default_str();
  c_multi->add_option("--ea", multicf.ea, "EA config file (JSON)");

  std::string bench_config;
  auto* c_bench = app.add_subcommand("bench", "Cross-validated benchmark");
  c_bench->add_option("--config", bench_config, "Benchmark config file")->required();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic dataset");
  c_synth->add_option("--layout", synth.layout, "blobs|xor|bundles")->capture_default_str();
  c_synth->add_option("--layout-file", synth.layout_file, "Layout file (JSON)");
  c_synth->add_option("--n", synth.n, "Number of rows")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: code=usage message=" << OneLine(e.what()) << "\n";
    return kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;
  g.output_given = out_opt->count() > 0;

  try {
    if (*c_train) {
      if (train.data.empty() && train.synthetic.empty()) {
        std::cerr << "error: code=usage message=train needs --data/--schema or --synthetic\n";
        return kExitUsage;
      }
      RunTrain(g, train);
    } else if (*c_explain) {
      RunExplain(g, explain);
    } else if (*c_group) {
      RunGroup(g, group);
    } else if (*c_multi) {
      RunMultiCf(g, multicf);
    } else if (*c_bench) {
      RunBench(g, bench_config);
    } else if (*c_synth) {
      RunSynth(g, synth);
    }
  } catch (const RuntimeFailure& f) {
    std::cerr << "error: code=" << f.code << " message=" << OneLine(f.message) << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: code=internal message=" << OneLine(e.what()) << "\n";
    return kExitRuntime;
  }
  return 0;
}
