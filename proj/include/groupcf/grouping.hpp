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

// Partitioning instances into groups. The primary strategy clusters the
// instances' individual counterfactuals by direction (1 - cosine similarity),
// optionally re-splitting every direction cluster by cost. Clustering the
// instances themselves in Euclidean space is provided for comparison.

#ifndef GROUPCF_GROUPING_HPP_
#define GROUPCF_GROUPING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "groupcf/cf_single.hpp"
#include "groupcf/core.hpp"

namespace groupcf {

struct Grouping {
  // Sorted index lists; pairwise disjoint and non-empty.
  std::vector<std::vector<std::size_t>> groups;
  // Sorted indices not assigned to any group.
  std::vector<std::size_t> noise;
  // Indices routed to noise because their individual CF was invalid or
  // had no direction.
  std::vector<std::size_t> excluded;
  // Free-form description of the strategy and parameters.
  std::string provenance;

  std::size_t num_groups() const { return groups.size(); }
  // True iff groups and noise partition [0, n).
  bool IsPartitionOf(std::size_t n) const;
};

enum class ClusterStrategy : std::uint8_t {
  kDbscanCfDirection,
  kDbscanInstances,
  kKmedoidsCfDirection,
};

const char* ClusterStrategyName(ClusterStrategy strategy);
ClusterStrategy ParseClusterStrategy(std::string_view name);

struct ClusterParams {
  ClusterStrategy strategy = ClusterStrategy::kDbscanCfDirection;
  double eps = 0.1;
  std::size_t min_pts = 5;
  // Inclusive cluster-count range for the k-medoids sweep.
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  bool cost_subcluster = false;
  double cost_eps = 0.1;
  // Weights for the cost used by the sub-clustering.
  std::vector<double> weights;
  std::uint64_t seed = 0;

  void Validate() const;
  std::string Describe() const;
};

// Direction of a delta: numeric offsets on their encoded column, a
// categorical change as the unit vector of its target category's one-hot
// column.
std::vector<double> DirectionVector(const FeatureSpace& space, const Delta& d);

// 1 - cosine similarity, in [0, 2]. Throws kUndefinedDirection when either
// delta has no direction.
double DirectionDistance(const FeatureSpace& space, const Delta& a,
                         const Delta& b);

// |DeltaCost(a) - DeltaCost(b)|.
double CostDistance(const Delta& a, const Delta& b,
                    std::span<const double> weights = {});

using PairwiseDistance = std::function<double(std::size_t, std::size_t)>;

// DBSCAN over n abstract points. A point is core when at least min_pts
// points (itself included) lie within distance <= eps. Clusters are the
// connected components of core points, numbered by their lowest core
// index, plus border points; a border point reachable from several clusters
// joins the lowest-numbered one. Everything else is noise.
Grouping Dbscan(std::size_t n, const PairwiseDistance& dist, double eps,
                std::size_t min_pts);

// Invalid or zero individual CFs become noise and are listed in
// `excluded`. Dispatches to the k-medoids sweep for that strategy.
Grouping GroupByCfDirections(const FeatureSpace& space,
                             std::span<const CfResult> cfs,
                             const ClusterParams& params);

// DBSCAN with Euclidean distance on encoded instances.
Grouping GroupByInstances(const FeatureSpace& space,
                          std::span<const Instance> xs,
                          const ClusterParams& params);

// Mean silhouette of a labelling under a distance; singletons score 0.
double MeanSilhouette(std::size_t n, const PairwiseDistance& dist,
                      std::span<const std::size_t> labels, std::size_t k);

// Voronoi-iteration k-medoids under the direction distance for each k in
// [k_min, k_max]; returns the k with the highest mean silhouette (ties go to
// the smaller k) and its grouping. Requires at least three deltas and
// 2 <= k_min <= k_max <= n - 1.
std::pair<std::size_t, Grouping> SweepClusterCount(
    const FeatureSpace& space, std::span<const Delta> deltas,
    std::size_t k_min, std::size_t k_max, std::uint64_t seed);

// Versioned JSON grouping file; see docs/formats.md.
inline constexpr int kGroupingFormatVersion = 1;
std::string SerializeGrouping(const Grouping& g, std::size_t n);
Grouping DeserializeGrouping(std::string_view text);

}  // namespace groupcf

#endif  // GROUPCF_GROUPING_HPP_
