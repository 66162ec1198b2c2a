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

#include "groupcf/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "groupcf/error.hpp"
#include "groupcf/models.hpp"
#include "groupcf/random.hpp"
#include "json_io.hpp"

namespace groupcf {

bool Grouping::IsPartitionOf(std::size_t n) const {
  std::vector<int> seen(n, 0);
  auto mark = [&](std::size_t i) {
    if (i >= n) return false;
    return ++seen[i] == 1;
  };
  for (const auto& g : groups) {
    if (g.empty()) return false;
    for (std::size_t i : g) {
      if (!mark(i)) return false;
    }
  }
  for (std::size_t i : noise) {
    if (!mark(i)) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

const char* ClusterStrategyName(ClusterStrategy strategy) {
  switch (strategy) {
    case ClusterStrategy::kDbscanCfDirection: return "dbscan-cf-direction";
    case ClusterStrategy::kDbscanInstances: return "dbscan-instances";
    case ClusterStrategy::kKmedoidsCfDirection: return "kmedoids-cf-direction";
  }
  return "unknown";
}

ClusterStrategy ParseClusterStrategy(std::string_view name) {
  if (name == "dbscan-cf-direction") return ClusterStrategy::kDbscanCfDirection;
  if (name == "dbscan-instances") return ClusterStrategy::kDbscanInstances;
  if (name == "kmedoids-cf-direction") {
    return ClusterStrategy::kKmedoidsCfDirection;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown clustering strategy '" + std::string(name) + "'");
}

void ClusterParams::Validate() const {
  Require(eps > 0.0, "eps must be positive");
  Require(min_pts >= 1, "min_pts must be at least 1");
  Require(cost_eps > 0.0, "cost eps must be positive");
  if (strategy == ClusterStrategy::kKmedoidsCfDirection) {
    Require(k_min >= 2 && k_min <= k_max, "k range must be non-empty and >= 2");
  }
}

std::string ClusterParams::Describe() const {
  std::ostringstream os;
  os << "strategy=" << ClusterStrategyName(strategy);
  if (strategy == ClusterStrategy::kKmedoidsCfDirection) {
    os << " k=[" << k_min << "," << k_max << "] seed=" << seed;
  } else {
    os << " eps=" << eps << " min_pts=" << min_pts;
  }
  if (cost_subcluster) os << " cost_subcluster eps=" << cost_eps;
  return os.str();
}

std::vector<double> DirectionVector(const FeatureSpace& space, const Delta& d) {
  Require(d.size() == space.size(), "delta arity does not match space");
  const Encoding enc(space);
  std::vector<double> v(enc.dimension(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].kind == ChangeKind::kOffset) {
      v[enc.column(i)] = d[i].offset;
    } else if (d[i].kind == ChangeKind::kSet) {
      v[enc.column(i) + static_cast<std::size_t>(d[i].category)] = 1.0;
    }
  }
  return v;
}

namespace {

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    Fail(ErrorCode::kUndefinedDirection, "direction of a zero delta is undefined");
  }
  const double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(1.0 - cos, 0.0, 2.0);
}

double Euclidean(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sq);
}

// Pairwise distances computed once; DBSCAN and k-medoids query each pair
// repeatedly.
class DistanceMatrix {
 public:
  template <typename F>
  DistanceMatrix(std::size_t n, F&& f) : n_(n), d_(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d_[i * n + j] = d_[j * n + i] = f(i, j);
      }
    }
  }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// Maps a grouping over a subset back to original indices.
Grouping Remap(const Grouping& sub, std::span<const std::size_t> ids) {
  Grouping g;
  for (const auto& grp : sub.groups) {
    std::vector<std::size_t> m;
    for (std::size_t i : grp) m.push_back(ids[i]);
    std::sort(m.begin(), m.end());
    g.groups.push_back(std::move(m));
  }
  for (std::size_t i : sub.noise) g.noise.push_back(ids[i]);
  std::sort(g.noise.begin(), g.noise.end());
  return g;
}

}  // namespace

double DirectionDistance(const FeatureSpace& space, const Delta& a,
                         const Delta& b) {
  return CosineDistance(DirectionVector(space, a), DirectionVector(space, b));
}

double CostDistance(const Delta& a, const Delta& b,
                    std::span<const double> weights) {
  return std::abs(DeltaCost(a, weights) - DeltaCost(b, weights));
}

Grouping Dbscan(std::size_t n, const PairwiseDistance& dist, double eps,
                std::size_t min_pts) {
  Require(eps > 0.0, "eps must be positive");
  Require(min_pts >= 1, "min_pts must be at least 1");
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbors[i].push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && dist(i, j) <= eps) neighbors[i].push_back(j);
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= min_pts;

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> cluster(n, kUnassigned);
  std::size_t clusters = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!core[seed] || cluster[seed] != kUnassigned) continue;
    const std::size_t id = clusters++;
    std::deque<std::size_t> queue{seed};
    cluster[seed] = id;
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop_front();
      for (std::size_t q : neighbors[p]) {
        if (core[q] && cluster[q] == kUnassigned) {
          cluster[q] = id;
          queue.push_back(q);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    for (std::size_t q : neighbors[i]) {
      if (core[q]) cluster[i] = std::min(cluster[i], cluster[q]);
    }
  }

  Grouping g;
  g.groups.resize(clusters);
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] == kUnassigned) {
      g.noise.push_back(i);
    } else {
      g.groups[cluster[i]].push_back(i);
    }
  }
  std::ostringstream os;
  os << "dbscan eps=" << eps << " min_pts=" << min_pts;
  g.provenance = os.str();
  return g;
}

double MeanSilhouette(std::size_t n, const PairwiseDistance& dist,
                      std::span<const std::size_t> labels, std::size_t k) {
  if (n == 0) return 0.0;
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];
  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[labels[i]] <= 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[labels[j]] += dist(i, j);
    }
    const double a = sums[labels[i]] / static_cast<double>(sizes[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != labels[i] && sizes[c] > 0) {
        b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
      }
    }
    const double denom = std::max(a, b);
    if (std::isfinite(b) && denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

namespace {

// Voronoi-iteration k-medoids with k-medoids++ seeding. Returns labels in
// [0, k).
std::vector<std::size_t> KMedoids(std::size_t n, const DistanceMatrix& dist,
                                  std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> medoids{static_cast<std::size_t>(UniformIndex(rng, n))};
  std::vector<double> nearest(n);
  while (medoids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t c : medoids) m = std::min(m, dist(i, c));
      nearest[i] = m * m;
      total += nearest[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double r = Uniform01(rng) * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] <= 0.0) continue;
        pick = i;
        r -= nearest[i];
        if (r < 0.0) break;
      }
    } else {
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (std::find(medoids.begin(), medoids.end(), i) == medoids.end()) pick = i;
      }
    }
    medoids.push_back(pick);
  }

  std::vector<std::size_t> labels(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if (dist(i, medoids[c]) < dist(i, medoids[best])) best = c;
      }
      labels[i] = best;
    }
    for (std::size_t c = 0; c < k; ++c) labels[medoids[c]] = c;

    bool changed = false;
    for (std::size_t c = 0; c < k; ++c) {
      double best_sum = std::numeric_limits<double>::infinity();
      std::size_t best = medoids[c];
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != c) continue;
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (labels[j] == c) sum += dist(i, j);
        }
        if (sum < best_sum) {
          best_sum = sum;
          best = i;
        }
      }
      if (best != medoids[c]) {
        medoids[c] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

}  // namespace

std::pair<std::size_t, Grouping> SweepClusterCount(
    const FeatureSpace& space, std::span<const Delta> deltas,
    std::size_t k_min, std::size_t k_max, std::uint64_t seed) {
  const std::size_t n = deltas.size();
  if (n < 3) {
    Fail(ErrorCode::kInsufficientData,
         "cluster-count sweep needs at least three counterfactuals");
  }
  Require(k_min >= 2 && k_min <= k_max && k_max <= n - 1,
          "k range must satisfy 2 <= k_min <= k_max <= n - 1");
  std::vector<std::vector<double>> dirs;
  dirs.reserve(n);
  for (const Delta& d : deltas) dirs.push_back(DirectionVector(space, d));
  const DistanceMatrix dist(n, [&](std::size_t i, std::size_t j) {
    return CosineDistance(dirs[i], dirs[j]);
  });
  const PairwiseDistance pd = [&](std::size_t i, std::size_t j) {
    return dist(i, j);
  };

  std::size_t best_k = k_min;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_labels;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    auto labels = KMedoids(n, dist, k, DeriveSeed(seed, k));
    const double score = MeanSilhouette(n, pd, labels, k);
    if (score > best_score + 1e-12) {
      best_score = score;
      best_k = k;
      best_labels = std::move(labels);
    }
  }

  Grouping g;
  g.groups.resize(best_k);
  for (std::size_t i = 0; i < n; ++i) g.groups[best_labels[i]].push_back(i);
  std::erase_if(g.groups, [](const auto& grp) { return grp.empty(); });
  std::sort(g.groups.begin(), g.groups.end());
  std::ostringstream os;
  os << "kmedoids k=" << best_k << " silhouette=" << best_score;
  g.provenance = os.str();
  return {best_k, std::move(g)};
}

Grouping GroupByCfDirections(const FeatureSpace& space,
                             std::span<const CfResult> cfs,
                             const ClusterParams& params) {
  params.Validate();
  std::vector<std::size_t> ids;
  std::vector<std::vector<double>> dirs;
  Grouping out;
  for (std::size_t i = 0; i < cfs.size(); ++i) {
    if (!cfs[i].valid || cfs[i].delta.is_zero()) {
      out.excluded.push_back(i);
      continue;
    }
    ids.push_back(i);
    dirs.push_back(DirectionVector(space, cfs[i].delta));
  }

  Grouping direction;
  if (params.strategy == ClusterStrategy::kKmedoidsCfDirection) {
    std::vector<Delta> deltas;
    for (std::size_t i : ids) deltas.push_back(cfs[i].delta);
    const std::size_t k_max = std::min(params.k_max, deltas.size() - 1);
    direction = SweepClusterCount(space, deltas, params.k_min, k_max,
                                  params.seed).second;
  } else {
    const DistanceMatrix dist(ids.size(), [&](std::size_t i, std::size_t j) {
      return CosineDistance(dirs[i], dirs[j]);
    });
    direction = Dbscan(
        ids.size(), [&](std::size_t i, std::size_t j) { return dist(i, j); },
        params.eps, params.min_pts);
  }
  Grouping mapped = Remap(direction, ids);

  if (params.cost_subcluster) {
    Grouping split;
    split.noise = mapped.noise;
    for (const auto& grp : mapped.groups) {
      std::vector<double> costs;
      for (std::size_t i : grp) costs.push_back(DeltaCost(cfs[i].delta, params.weights));
      Grouping sub = Dbscan(
          grp.size(),
          [&](std::size_t a, std::size_t b) { return std::abs(costs[a] - costs[b]); },
          params.cost_eps, params.min_pts);
      Grouping back = Remap(sub, grp);
      for (auto& g : back.groups) split.groups.push_back(std::move(g));
      split.noise.insert(split.noise.end(), back.noise.begin(), back.noise.end());
    }
    mapped = std::move(split);
  }

  out.groups = std::move(mapped.groups);
  out.noise = std::move(mapped.noise);
  out.noise.insert(out.noise.end(), out.excluded.begin(), out.excluded.end());
  std::sort(out.noise.begin(), out.noise.end());
  out.provenance = params.Describe();
  return out;
}

Grouping GroupByInstances(const FeatureSpace& space,
                          std::span<const Instance> xs,
                          const ClusterParams& params) {
  params.Validate();
  const Encoding enc(space);
  std::vector<std::vector<double>> rows;
  rows.reserve(xs.size());
  for (const Instance& x : xs) rows.push_back(enc.Encode(x));
  const DistanceMatrix dist(xs.size(), [&](std::size_t i, std::size_t j) {
    return Euclidean(rows[i], rows[j]);
  });
  Grouping g = Dbscan(
      xs.size(), [&](std::size_t i, std::size_t j) { return dist(i, j); },
      params.eps, params.min_pts);
  ClusterParams described = params;
  described.strategy = ClusterStrategy::kDbscanInstances;
  g.provenance = described.Describe();
  return g;
}

using internal::ordered_json;

std::string SerializeGrouping(const Grouping& g, std::size_t n) {
  ordered_json j;
  j["format"] = "groupcf.grouping";
  j["version"] = kGroupingFormatVersion;
  j["size"] = n;
  j["provenance"] = g.provenance;
  j["groups"] = g.groups;
  j["noise"] = g.noise;
  j["excluded"] = g.excluded;
  return j.dump(1) + "\n";
}

Grouping DeserializeGrouping(std::string_view text) {
  const ordered_json j = internal::ParseJson(text, "grouping file");
  internal::CheckFormat(j, "groupcf.grouping", kGroupingFormatVersion);
  try {
    Grouping g;
    g.provenance = j.at("provenance").get<std::string>();
    g.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
    g.noise = j.at("noise").get<std::vector<std::size_t>>();
    g.excluded = internal::GetOr(j, "excluded", std::vector<std::size_t>{});
    if (!g.IsPartitionOf(j.at("size").get<std::size_t>())) {
      Fail(ErrorCode::kParse, "grouping file violates the partition law");
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed grouping file: ") + e.what());
  }
}

}  // namespace groupcf
