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

// Schemas, CSV ingestion and the synthetic generators.

#include <algorithm>
#include <cmath>
#include <map>

#include "config_json.hpp"
#include "format.hpp"
#include "groupcf/error.hpp"
#include "groupcf/harness.hpp"
#include "groupcf/random.hpp"
#include "json_io.hpp"

namespace groupcf {

using internal::ordered_json;

namespace {

const char* RoleName(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature: return "feature";
    case ColumnRole::kLabel: return "label";
    case ColumnRole::kIgnore: return "ignore";
  }
  return "unknown";
}

ColumnRole ParseRole(std::string_view name) {
  if (name == "feature") return ColumnRole::kFeature;
  if (name == "label") return ColumnRole::kLabel;
  if (name == "ignore") return ColumnRole::kIgnore;
  Fail(ErrorCode::kParse, "unknown column role '" + std::string(name) + "'");
}

const ColumnSpec& LabelColumn(const DatasetSchema& schema) {
  for (const auto& c : schema.columns) {
    if (c.role == ColumnRole::kLabel) return c;
  }
  Fail(ErrorCode::kInvalidArgument, "schema has no label column");
}

}  // namespace

void DatasetSchema::Validate() const {
  std::size_t labels = 0;
  for (const auto& c : columns) {
    if (c.role != ColumnRole::kLabel) continue;
    ++labels;
    Require(c.categories.size() == 2,
            "label column '" + c.name + "' must list exactly two values");
    Require(std::find(c.categories.begin(), c.categories.end(),
                      positive_label) != c.categories.end(),
            "positive label '" + positive_label +
                "' is not a value of the label column");
  }
  Require(labels == 1, "schema must have exactly one label column");
  (void)ToFeatureSpace();
}

FeatureSpace DatasetSchema::ToFeatureSpace() const {
  std::vector<FeatureDescriptor> features;
  for (const auto& c : columns) {
    if (c.role != ColumnRole::kFeature) continue;
    features.push_back(
        c.kind == FeatureKind::kNumeric
            ? FeatureDescriptor::Numeric(c.name, c.min, c.max, c.actionable)
            : FeatureDescriptor::Categorical(c.name, c.categories, c.actionable));
  }
  const ColumnSpec& label = LabelColumn(*this);
  const std::string& negative = label.categories[0] == positive_label
                                    ? label.categories[1]
                                    : label.categories[0];
  return FeatureSpace(std::move(features), {negative, positive_label});
}

DatasetSchema ParseSchema(std::string_view json) {
  const ordered_json j = internal::ParseJson(json, "schema");
  internal::CheckFormat(j, "groupcf.schema", kSchemaFormatVersion);
  internal::RejectUnknownKeys(j, "schema",
                              {"format", "version", "positive_label", "columns",
                               "description"});
  DatasetSchema schema;
  try {
    schema.positive_label = j.at("positive_label").get<std::string>();
    for (const auto& jc : j.at("columns")) {
      internal::RejectUnknownKeys(jc, "schema column",
                                  {"name", "role", "kind", "min", "max",
                                   "categories", "actionable"});
      ColumnSpec c;
      c.name = jc.at("name").get<std::string>();
      c.role = ParseRole(internal::GetOr<std::string>(jc, "role", "feature"));
      const std::string kind = internal::GetOr<std::string>(
          jc, "kind", c.role == ColumnRole::kLabel ? "categorical" : "numeric");
      if (kind == "numeric") {
        c.kind = FeatureKind::kNumeric;
        if (c.role == ColumnRole::kFeature) {
          c.min = jc.at("min").get<double>();
          c.max = jc.at("max").get<double>();
        }
      } else if (kind == "categorical") {
        c.kind = FeatureKind::kCategorical;
        if (c.role != ColumnRole::kIgnore) {
          c.categories = jc.at("categories").get<std::vector<std::string>>();
        }
      } else {
        Fail(ErrorCode::kParse, "unknown column kind '" + kind + "'");
      }
      c.actionable = internal::GetOr(jc, "actionable", true);
      schema.columns.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed schema: ") + e.what());
  }
  schema.Validate();
  return schema;
}

DatasetSchema LoadSchema(const std::string& path) {
  return ParseSchema(internal::ReadTextFile(path));
}

std::string SerializeSchema(const DatasetSchema& schema) {
  ordered_json j;
  j["format"] = "groupcf.schema";
  j["version"] = kSchemaFormatVersion;
  j["positive_label"] = schema.positive_label;
  ordered_json cols = ordered_json::array();
  for (const auto& c : schema.columns) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["role"] = RoleName(c.role);
    jc["kind"] = c.kind == FeatureKind::kNumeric ? "numeric" : "categorical";
    if (c.role == ColumnRole::kFeature && c.kind == FeatureKind::kNumeric) {
      jc["min"] = c.min;
      jc["max"] = c.max;
    }
    if (c.kind == FeatureKind::kCategorical) jc["categories"] = c.categories;
    if (c.role == ColumnRole::kFeature) jc["actionable"] = c.actionable;
    cols.push_back(std::move(jc));
  }
  j["columns"] = std::move(cols);
  return j.dump(1) + "\n";
}

DatasetSchema SchemaFromSpace(const FeatureSpace& space,
                              const std::string& label_column) {
  DatasetSchema schema;
  for (const auto& f : space.features()) {
    ColumnSpec c;
    c.name = f.name;
    c.kind = f.kind;
    c.min = f.alpha;
    c.max = f.beta;
    c.categories = f.categories;
    c.actionable = f.actionable;
    schema.columns.push_back(std::move(c));
  }
  ColumnSpec label;
  label.name = label_column;
  label.role = ColumnRole::kLabel;
  label.kind = FeatureKind::kCategorical;
  label.categories = space.labels();
  schema.columns.push_back(std::move(label));
  schema.positive_label = space.labels().at(1);
  return schema;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) Fail(ErrorCode::kParse, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string Where(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

double ParseCell(const FeatureDescriptor& f, std::string_view raw,
                 std::size_t row) {
  if (f.is_numeric()) {
    auto v = internal::ParseDouble(raw);
    if (!v || !std::isfinite(*v)) {
      Fail(ErrorCode::kParse, Where(row, f.name) + ": cannot parse '" +
                                  std::string(raw) + "' as a number");
    }
    if (*v < f.alpha || *v > f.beta) {
      Fail(ErrorCode::kBounds, Where(row, f.name) + ": value " +
                                   internal::FormatDouble(*v) + " outside [" +
                                   internal::FormatDouble(f.alpha) + ", " +
                                   internal::FormatDouble(f.beta) + "]");
    }
    return *v;
  }
  auto idx = f.CategoryIndex(internal::Trim(raw));
  if (!idx) {
    Fail(ErrorCode::kBounds, Where(row, f.name) + ": unknown category '" +
                                 std::string(raw) + "'");
  }
  return *idx;
}

}  // namespace

LabeledData ParseDataset(std::string_view csv, const DatasetSchema& schema) {
  schema.Validate();
  const auto rows = ParseCsv(csv);
  if (rows.empty()) Fail(ErrorCode::kParse, "CSV file has no header row");
  const auto& header = rows.front();

  std::map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(internal::Trim(header[c]));
    if (!position.emplace(name, c).second) {
      Fail(ErrorCode::kParse, "duplicate CSV column '" + name + "'");
    }
    const bool known = std::any_of(
        schema.columns.begin(), schema.columns.end(),
        [&](const ColumnSpec& s) { return s.name == name; });
    if (!known) {
      Fail(ErrorCode::kParse, "CSV column '" + name +
                                  "' is not in the schema (mark it with role "
                                  "\"ignore\" to skip it)");
    }
  }
  for (const auto& s : schema.columns) {
    if (!position.contains(s.name)) {
      Fail(ErrorCode::kParse, "missing column '" + s.name + "'");
    }
  }

  LabeledData data;
  data.space = schema.ToFeatureSpace();
  const ColumnSpec& label = LabelColumn(schema);
  const std::size_t label_pos = position.at(label.name);
  std::vector<std::size_t> feature_pos;
  for (const auto& f : data.space.features()) feature_pos.push_back(position.at(f.name));

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      Fail(ErrorCode::kParse, "row " + std::to_string(r) + ": expected " +
                                  std::to_string(header.size()) +
                                  " fields, got " + std::to_string(row.size()));
    }
    Instance x;
    x.values.reserve(feature_pos.size());
    for (std::size_t i = 0; i < feature_pos.size(); ++i) {
      x.values.push_back(ParseCell(data.space.feature(i), row[feature_pos[i]], r));
    }
    const std::string_view y = internal::Trim(row[label_pos]);
    auto yi = data.space.LabelIndex(y);
    if (!yi) {
      Fail(ErrorCode::kBounds, Where(r, label.name) + ": unknown label '" +
                                   std::string(y) + "'");
    }
    data.instances.push_back(std::move(x));
    data.labels.push_back(*yi);
  }
  return data;
}

LabeledData LoadDataset(const std::string& csv_path,
                        const DatasetSchema& schema) {
  return ParseDataset(internal::ReadTextFile(csv_path), schema);
}

std::vector<Instance> ParseInstances(std::string_view csv,
                                     const FeatureSpace& space) {
  const auto rows = ParseCsv(csv);
  if (rows.empty()) Fail(ErrorCode::kParse, "CSV file has no header row");
  std::vector<std::size_t> pos(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto it = std::find_if(rows[0].begin(), rows[0].end(), [&](const auto& h) {
      return internal::Trim(h) == space.feature(i).name;
    });
    if (it == rows[0].end()) {
      Fail(ErrorCode::kParse, "missing column '" + space.feature(i).name + "'");
    }
    pos[i] = static_cast<std::size_t>(it - rows[0].begin());
  }
  std::vector<Instance> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      Fail(ErrorCode::kParse, "row " + std::to_string(r) + ": wrong field count");
    }
    Instance x;
    for (std::size_t i = 0; i < space.size(); ++i) {
      x.values.push_back(ParseCell(space.feature(i), rows[r][pos[i]], r));
    }
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string DatasetToCsv(const LabeledData& data,
                         const std::string& label_column) {
  std::string out;
  for (const auto& f : data.space.features()) out += CsvField(f.name) + ",";
  out += CsvField(label_column) + "\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    const Instance& x = data.instances[r];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& f = data.space.feature(i);
      out += f.is_numeric()
                 ? internal::FormatDouble(x[i])
                 : CsvField(f.categories[static_cast<std::size_t>(x[i])]);
      out += ",";
    }
    out += CsvField(data.space.labels()[static_cast<std::size_t>(data.labels[r])]);
    out += "\n";
  }
  return out;
}

const char* SyntheticKindName(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kBlobs: return "blobs";
    case SyntheticKind::kXor: return "xor";
    case SyntheticKind::kBundles: return "bundles";
  }
  return "unknown";
}

SyntheticKind ParseSyntheticKind(std::string_view name) {
  if (name == "blobs") return SyntheticKind::kBlobs;
  if (name == "xor") return SyntheticKind::kXor;
  if (name == "bundles") return SyntheticKind::kBundles;
  Fail(ErrorCode::kInvalidArgument,
       "unknown synthetic layout '" + std::string(name) + "'");
}

SyntheticLayout ParseSyntheticLayout(std::string_view json) {
  const ordered_json j = json.empty() ? ordered_json::object()
                                      : internal::ParseJson(json, "synthetic layout");
  internal::RejectUnknownKeys(j, "synthetic layout",
                              {"kind", "dims", "separation", "bundles",
                               "noise_features", "categorical_features"});
  SyntheticLayout l;
  try {
    l.kind = ParseSyntheticKind(
        internal::GetOr<std::string>(j, "kind", SyntheticKindName(l.kind)));
    l.dims = internal::GetOr(j, "dims", l.dims);
    l.separation = internal::GetOr(j, "separation", l.separation);
    l.bundles = internal::GetOr(j, "bundles", l.bundles);
    l.noise_features = internal::GetOr(j, "noise_features", l.noise_features);
    l.categorical_features =
        internal::GetOr(j, "categorical_features", l.categorical_features);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed synthetic layout: ") + e.what());
  }
  return l;
}

LabeledData MakeSynthetic(const SyntheticLayout& layout, std::size_t n,
                          std::uint64_t seed) {
  Require(n >= 2, "synthetic data needs at least two instances");
  constexpr double kLo = 0.0;
  constexpr double kHi = 10.0;
  std::vector<FeatureDescriptor> features;
  auto numeric = [&](const std::string& name) {
    features.push_back(FeatureDescriptor::Numeric(name, kLo, kHi));
  };
  switch (layout.kind) {
    case SyntheticKind::kBlobs:
      Require(layout.dims >= 1, "blobs need at least one dimension");
      for (std::size_t i = 0; i < layout.dims; ++i) numeric("x" + std::to_string(i));
      break;
    case SyntheticKind::kXor:
      numeric("x0");
      numeric("x1");
      break;
    case SyntheticKind::kBundles:
      Require(layout.bundles >= 1, "bundles layout needs at least one bundle");
      for (std::size_t i = 0; i < layout.bundles; ++i) numeric("b" + std::to_string(i));
      for (std::size_t i = 0; i < layout.noise_features; ++i) {
        numeric("z" + std::to_string(i));
      }
      break;
  }
  for (std::size_t i = 0; i < layout.categorical_features; ++i) {
    features.push_back(
        FeatureDescriptor::Categorical("c" + std::to_string(i), {"a", "b", "c"}));
  }

  LabeledData data;
  data.space = FeatureSpace(std::move(features), {"neg", "pos"});
  Rng rng(seed);
  const std::size_t numeric_count = data.space.size() - layout.categorical_features;
  for (std::size_t r = 0; r < n; ++r) {
    const int y = static_cast<int>(r % 2);
    Instance x;
    x.values.resize(data.space.size());
    int label = y;
    switch (layout.kind) {
      case SyntheticKind::kBlobs: {
        const double centre = 5.0 + (y == 1 ? 0.5 : -0.5) * layout.separation;
        for (std::size_t i = 0; i < layout.dims; ++i) {
          x.values[i] = std::clamp(centre + StandardNormal(rng), kLo, kHi);
        }
        break;
      }
      case SyntheticKind::kXor: {
        x.values[0] = Uniform(rng, kLo, kHi);
        x.values[1] = Uniform(rng, kLo, kHi);
        label = (x.values[0] > 5.0) != (x.values[1] > 5.0) ? 1 : 0;
        break;
      }
      case SyntheticKind::kBundles: {
        const std::size_t k = (r / 2) % layout.bundles;
        for (std::size_t b = 0; b < layout.bundles; ++b) {
          x.values[b] = Uniform(rng, 1.0, 3.0);
        }
        x.values[k] = y == 1 ? Uniform(rng, 7.4, 9.5) : Uniform(rng, 5.0, 6.6);
        for (std::size_t i = layout.bundles; i < numeric_count; ++i) {
          x.values[i] = Uniform(rng, kLo, kHi);
        }
        break;
      }
    }
    for (std::size_t i = numeric_count; i < data.space.size(); ++i) {
      x.values[i] = static_cast<double>(UniformIndex(rng, 3));
    }
    data.instances.push_back(std::move(x));
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace groupcf
