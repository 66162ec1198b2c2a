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

#include "groupcf/multi_cf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "groupcf/error.hpp"
#include "groupcf/parallel.hpp"

namespace groupcf {

void EaConfig::Validate() const {
  Require(mu >= 1, "mu must be at least 1");
  Require(lambda >= 1, "lambda must be at least 1");
  Require(generations >= 0, "generations must be non-negative");
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  Require(rate(mutation_rate) && rate(crossover_rate) &&
              rate(sparsity_reset) && rate(init_change_prob),
          "EA rates must lie in [0, 1]");
  Require(mutation_scale >= 0.0, "mutation scale must be non-negative");
  Require(mutation_decades >= 0.0, "mutation decades must be non-negative");
  Require(tournament >= 1, "tournament size must be at least 1");
  Require(C > 0.0, "C must be positive");
  Require(margin_weight >= 0.0, "margin weight must be non-negative");
  Require(patience >= 0, "patience must be non-negative");
  for (double w : weights) Require(w > 0.0, "cost weights must be positive");
}

std::size_t MultiCfResult::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

std::vector<bool> EvaluateValidity(const Model& model,
                                   std::span<const Instance> group,
                                   const Delta& d, int target) {
  std::vector<bool> valid(group.size(), false);
  Instance applied;
  for (std::size_t j = 0; j < group.size(); ++j) {
    valid[j] = TryApplyDelta(model.space(), group[j], d, applied) &&
               model.Predict(applied) == target;
  }
  return valid;
}

double Correctness(const std::vector<bool>& valid) {
  if (valid.empty()) return 0.0;
  return static_cast<double>(std::count(valid.begin(), valid.end(), true)) /
         static_cast<double>(valid.size());
}

double Fitness(const Delta& d, std::span<const Instance> group,
               const Model& model, int target, const EaConfig& cfg) {
  double loss = 0.0;
  thread_local Instance applied;
  const double sign = target == 1 ? 1.0 : -1.0;
  for (const Instance& x : group) {
    if (!TryApplyDelta(model.space(), x, d, applied)) {
      loss += 1.0;
      continue;
    }
    const double margin = model.Margin(applied);
    const int label = margin > 0.0 ? 1 : 0;
    if (label != target) loss += 1.0;
    if (cfg.margin_weight > 0.0) {
      loss += cfg.margin_weight * std::max(0.0, -sign * margin);
    }
  }
  return Cost(d, cfg.cost_kind, cfg.weights) + cfg.C * loss;
}

Delta MeanDelta(std::span<const Delta> deltas, std::size_t arity) {
  Delta mean = Delta::NoChange(arity);
  if (deltas.empty()) return mean;
  const double n = static_cast<double>(deltas.size());
  for (std::size_t i = 0; i < arity; ++i) {
    double sum = 0.0;
    bool numeric = false;
    std::map<int, std::size_t> votes;
    for (const Delta& d : deltas) {
      if (d[i].kind == ChangeKind::kOffset) {
        sum += d[i].offset;
        numeric = true;
      } else if (d[i].kind == ChangeKind::kSet) {
        ++votes[d[i].category];
      }
    }
    if (numeric) {
      mean[i] = Change::Offset(sum / n);
      continue;
    }
    for (const auto& [cat, count] : votes) {
      if (2 * count > deltas.size()) mean[i] = Change::Set(cat);
    }
  }
  return mean;
}

namespace {

bool Frozen(const FeatureSpace& space, const FeasibleChangeSet& fcs,
            std::size_t i) {
  if (!space.feature(i).actionable) return true;
  return space.feature(i).is_numeric() ? fcs.intervals[i].width() <= 0.0
                                       : fcs.categories[i].empty();
}

Change RandomGene(const FeatureSpace& space, const FeasibleChangeSet& fcs,
                  std::size_t i, Rng& rng) {
  if (space.feature(i).is_numeric()) {
    const Interval& iv = fcs.intervals[i];
    return Change::Offset(Uniform(rng, iv.lower, iv.upper));
  }
  const auto& cats = fcs.categories[i];
  return Change::Set(cats[UniformIndex(rng, cats.size())]);
}

}  // namespace

std::vector<Delta> InitPopulation(const FeatureSpace& space,
                                  const FeasibleChangeSet& fcs,
                                  const EaConfig& cfg,
                                  std::span<const Delta> warm_start, Rng& rng) {
  Require(fcs.size() == space.size(), "change set does not match space");
  std::vector<Delta> pop;
  pop.reserve(std::max(cfg.mu, warm_start.size() + 1));
  pop.push_back(Delta::NoChange(space.size()));
  for (const Delta& w : warm_start) {
    Require(w.size() == space.size(), "warm-start delta arity mismatch");
    Delta clipped = fcs.Clip(w);
    for (std::size_t i = 0; i < clipped.size(); ++i) {
      if (!space.feature(i).actionable) clipped[i] = Change::None();
    }
    if (std::find(pop.begin(), pop.end(), clipped) == pop.end()) {
      pop.push_back(std::move(clipped));
    }
  }
  while (pop.size() < cfg.mu) {
    Delta d = Delta::NoChange(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (Frozen(space, fcs, i)) continue;
      if (Bernoulli(rng, cfg.init_change_prob)) d[i] = RandomGene(space, fcs, i, rng);
    }
    pop.push_back(std::move(d));
  }
  return pop;
}

Delta Mutate(const Delta& d, const FeasibleChangeSet& fcs, const EaConfig& cfg,
             Rng& rng) {
  Delta out = d;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!Bernoulli(rng, cfg.mutation_rate)) continue;
    Change& gene = out[i];
    const bool numeric = fcs.categories[i].empty();
    const Interval& iv = fcs.intervals[i];
    if (numeric ? iv.width() <= 0.0 : false) {
      gene = Change::None();
      continue;
    }
    if (Bernoulli(rng, cfg.sparsity_reset)) {
      gene = Change::None();
      continue;
    }
    if (numeric) {
      const double current = gene.kind == ChangeKind::kOffset ? gene.offset : 0.0;
      const double shrink = std::pow(10.0, -Uniform(rng, 0.0, cfg.mutation_decades));
      const double step = StandardNormal(rng) * cfg.mutation_scale * shrink * iv.width();
      gene = Change::Offset(std::clamp(current + step, iv.lower, iv.upper));
    } else {
      const auto& cats = fcs.categories[i];
      const std::uint64_t pick = UniformIndex(rng, cats.size() + 1);
      gene = pick == 0 ? Change::None() : Change::Set(cats[pick - 1]);
    }
  }
  return out;
}

Delta Crossover(const Delta& a, const Delta& b, const EaConfig& cfg, Rng& rng) {
  if (!Bernoulli(rng, cfg.crossover_rate)) return a;
  Delta child = a;
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (Bernoulli(rng, 0.5)) child[i] = b[i];
  }
  return child;
}

namespace {

struct Individual {
  Delta delta;
  double fitness = 0.0;
};

void SortByFitness(std::vector<Individual>& pop) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& a, const Individual& b) {
                     return a.fitness < b.fitness;
                   });
}

void Notify(const PopulationObserver& observer, int generation,
            const std::vector<Individual>& pop) {
  if (!observer) return;
  std::vector<Delta> deltas;
  deltas.reserve(pop.size());
  for (const auto& ind : pop) deltas.push_back(ind.delta);
  observer(generation, deltas);
}

}  // namespace

MultiCfResult RunMuPlusLambda(std::span<const Instance> group,
                              const Model& model, int target,
                              const EaConfig& cfg,
                              std::span<const Delta> warm_start,
                              const PopulationObserver& observer) {
  cfg.Validate();
  Require(!group.empty(), "multi-instance counterfactual of an empty group");
  const FeatureSpace& space = model.space();
  Require(target >= 0 && target < static_cast<int>(space.labels().size()),
          "target label out of range");
  Require(cfg.weights.empty() || cfg.weights.size() == space.size(),
          "cost weights arity does not match space");
  const int current = model.Predict(group.front());
  for (const Instance& x : group) {
    Require(model.Predict(x) == current,
            "group members must share the same prediction");
  }
  Require(current != target, "group is already predicted as the target");

  const FeasibleChangeSet fcs = ComputeFeasibleChangeSet(space, group);
  Rng rng(cfg.seed);

  auto evaluate = [&](std::vector<Individual>& inds, std::size_t from) {
    ParallelFor(inds.size() - from, cfg.threads, [&](std::size_t k) {
      Individual& ind = inds[from + k];
      ind.fitness = Fitness(ind.delta, group, model, target, cfg);
    });
  };

  std::vector<Individual> pop;
  for (Delta& d : InitPopulation(space, fcs, cfg, warm_start, rng)) {
    pop.push_back({std::move(d), 0.0});
  }
  evaluate(pop, 0);
  SortByFitness(pop);
  if (pop.size() > cfg.mu) pop.resize(cfg.mu);
  Notify(observer, 0, pop);

  MultiCfResult result;
  result.trace.push_back(pop.front().fitness);
  int stale = 0;
  int gen = 0;
  while (gen < cfg.generations) {
    ++gen;
    const std::size_t parents = pop.size();
    pop.reserve(parents + cfg.lambda);
    auto select = [&]() -> const Delta& {
      std::size_t best = UniformIndex(rng, parents);
      for (std::size_t t = 1; t < cfg.tournament; ++t) {
        best = std::min<std::size_t>(best, UniformIndex(rng, parents));
      }
      // pop is sorted, so the lowest index is the fittest contestant.
      return pop[best].delta;
    };
    for (std::size_t k = 0; k < cfg.lambda; ++k) {
      const Delta& a = select();
      const Delta& b = select();
      pop.push_back({Mutate(Crossover(a, b, cfg, rng), fcs, cfg, rng), 0.0});
    }
    evaluate(pop, parents);
    SortByFitness(pop);
    pop.resize(cfg.mu);
    Notify(observer, gen, pop);

    const double best = pop.front().fitness;
    if (best < result.trace.back()) {
      stale = 0;
    } else {
      ++stale;
    }
    result.trace.push_back(best);
    if (cfg.patience > 0 && stale >= cfg.patience) break;
  }

  result.generations_run = gen;
  result.delta = pop.front().delta;
  result.valid = EvaluateValidity(model, group, result.delta, target);
  result.correctness = Correctness(result.valid);
  result.cost = Cost(result.delta, cfg.cost_kind, cfg.weights);
  return result;
}

MultiCfResult WarrenMaxCoverage(std::span<const Delta> candidates,
                                std::span<const Instance> group,
                                const Model& model, int target,
                                std::span<const double> weights) {
  Require(!candidates.empty(), "max-coverage selection needs candidates");
  MultiCfResult best;
  std::size_t best_count = 0;
  bool have = false;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::vector<bool> valid =
        EvaluateValidity(model, group, candidates[c], target);
    const std::size_t count =
        static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
    const double cost = DeltaCost(candidates[c], weights);
    if (!have || count > best_count ||
        (count == best_count && cost < best.cost)) {
      have = true;
      best_count = count;
      best.delta = candidates[c];
      best.valid = std::move(valid);
      best.cost = cost;
      best.source_index = c;
    }
  }
  best.correctness = Correctness(best.valid);
  return best;
}

}  // namespace groupcf
