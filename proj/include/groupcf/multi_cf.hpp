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

// Multi-instance counterfactuals: one delta shared by every member of a
// group. The solver is a (mu + lambda) genetic algorithm over deltas that
// minimises
//
//     cost(delta) + C * #{ j : h(x_j ⊕ delta) != y_cf }
//
// with every candidate confined to the group's feasible change set. A
// max-coverage selection over individual counterfactuals is provided as a
// baseline.

#ifndef GROUPCF_MULTI_CF_HPP_
#define GROUPCF_MULTI_CF_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "groupcf/core.hpp"
#include "groupcf/models.hpp"
#include "groupcf/random.hpp"

namespace groupcf {

struct EaConfig {
  std::size_t mu = 50;
  std::size_t lambda = 100;
  int generations = 200;
  // Per-gene probability that mutate touches a gene.
  double mutation_rate = 0.2;
  // Standard deviation of a numeric perturbation, as a fraction of u_i - l_i.
  double mutation_scale = 0.1;
  // Each numeric step is further shrunk by 10^-U(0, mutation_decades), so
  // coarse and fine moves coexist; 0 gives a fixed scale.
  double mutation_decades = 2.0;
  double crossover_rate = 0.7;
  // Probability that a mutated gene is reset to no change.
  double sparsity_reset = 0.1;
  // Per-gene change probability when sampling random initial individuals.
  double init_change_prob = 0.5;
  std::size_t tournament = 3;
  double C = 100.0;
  CostKind cost_kind = CostKind::kWeightedPsi;
  std::vector<double> weights;
  // Optional hinge on the signed margin, added to the label loss. Zero
  // leaves the plain 0-1 loss.
  double margin_weight = 0.0;
  std::uint64_t seed = 0;
  // Stop after this many generations without improvement; 0 disables.
  int patience = 30;
  // Fitness evaluation workers. Results do not depend on this value.
  int threads = 1;

  void Validate() const;
};

struct MultiCfResult {
  Delta delta;
  std::vector<bool> valid;
  double correctness = 0.0;
  double cost = 0.0;
  // Best fitness after initialisation and after every generation.
  std::vector<double> trace;
  int generations_run = 0;
  // For the max-coverage baseline: index of the chosen candidate.
  std::size_t source_index = 0;

  std::size_t valid_count() const;
};

// Per-member validity of a delta; an infeasible application is invalid.
std::vector<bool> EvaluateValidity(const Model& model,
                                   std::span<const Instance> group,
                                   const Delta& d, int target);

// Fraction of valid members; 0 for an empty group.
double Correctness(const std::vector<bool>& valid);

// Scalarised objective; lower is better. d must lie in the group's feasible
// change set.
double Fitness(const Delta& d, std::span<const Instance> group,
               const Model& model, int target, const EaConfig& cfg);

// Numeric offsets averaged over the inputs (a missing change counts as
// zero); a categorical change is kept when a strict majority of the inputs
// set the same category.
Delta MeanDelta(std::span<const Delta> deltas, std::size_t arity);

// Generation 0: the all-no-change delta, then each warm-start delta clipped
// into fcs (duplicates dropped), then uniform random individuals until mu
// individuals exist. If the warm start alone exceeds mu - 1 every clipped
// warm-start delta is kept and the caller truncates by fitness.
std::vector<Delta> InitPopulation(const FeatureSpace& space,
                                  const FeasibleChangeSet& fcs,
                                  const EaConfig& cfg,
                                  std::span<const Delta> warm_start, Rng& rng);

// Each gene independently with probability cfg.mutation_rate: reset to no
// change with probability cfg.sparsity_reset, otherwise a numeric gene gets
// a Gaussian step of scale mutation_scale * (u_i - l_i) clipped into
// [l_i, u_i] and a categorical gene is redrawn from {none} ∪ categories.
Delta Mutate(const Delta& d, const FeasibleChangeSet& fcs, const EaConfig& cfg,
             Rng& rng);

// Uniform crossover; with probability 1 - cfg.crossover_rate returns a.
Delta Crossover(const Delta& a, const Delta& b, const EaConfig& cfg, Rng& rng);

// Optional hook called with each generation's full population (after
// initialisation and after every survivor selection).
using PopulationObserver =
    std::function<void(int generation, std::span<const Delta> population)>;

// Throws on an empty group or when a member is already predicted as target
// or members disagree on their current prediction.
MultiCfResult RunMuPlusLambda(std::span<const Instance> group,
                              const Model& model, int target,
                              const EaConfig& cfg,
                              std::span<const Delta> warm_start = {},
                              const PopulationObserver& observer = {});

// Picks the candidate delta valid for the most group members; ties go to the
// lower cost, then the lower index. cost is DeltaCost with the given weights.
MultiCfResult WarrenMaxCoverage(std::span<const Delta> candidates,
                                std::span<const Instance> group,
                                const Model& model, int target,
                                std::span<const double> weights = {});

}  // namespace groupcf

#endif  // GROUPCF_MULTI_CF_HPP_
