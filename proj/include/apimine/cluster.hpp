#pragma once

// Agglomerative clustering shared by client partitioning, interface
// identification, layer construction and the residual/baseline stages.
//
// Start from singletons and repeatedly merge the admissible pair whose union
// has the highest fitness. Ties go to the lexicographically smallest union.
// How the merge sequence becomes a partition depends on the cut policy:
//
//  - threshold: stop as soon as the best union scores below tau.
//  - quality_cut: merge until no admissible pair is left, then walk each
//    dendrogram top-down and keep a node when its fitness is at least the
//    mean fitness of its two children, otherwise descend.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "apimine/model.hpp"

namespace apimine {

enum class CutPolicy { threshold, quality_cut };

struct ClusterOptions {
  CutPolicy policy = CutPolicy::threshold;
  double tau = 0.5;
  /// Optional merge gate; pairs for which it returns false are never merged.
  std::function<bool(const ClassSet&, const ClassSet&)> admissible;
};

struct Dendrogram {
  struct Node {
    ClassSet classes;
    double fitness = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> children;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> roots;
};

namespace detail {

inline ClassSet set_union(const ClassSet& a, const ClassSet& b) {
  ClassSet u = a;
  u.insert(b.begin(), b.end());
  return u;
}

}  // namespace detail

/// Runs the merge loop and returns the full merge forest. Under the threshold
/// policy the loop stops at the first sub-tau merge; otherwise it runs until
/// no admissible pair remains.
template <class Fitness>
Dendrogram build_dendrogram(const ClassSet& items, Fitness&& fitness,
                            const ClusterOptions& opts) {
  Dendrogram d;
  std::vector<std::size_t> live;
  for (const auto& id : items) {
    ClassSet single{id};
    const double f = fitness(single);
    d.nodes.push_back({std::move(single), f, std::nullopt});
    live.push_back(d.nodes.size() - 1);
  }

  struct Candidate {
    bool admissible = false;
    double fitness = 0.0;
    ClassSet merged;
  };
  // Fitness of a union depends only on the two node sets, so pair scores
  // stay valid until one side is merged away.
  std::map<std::pair<std::size_t, std::size_t>, Candidate> cache;
  auto candidate = [&](std::size_t a, std::size_t b) -> const Candidate& {
    auto key = std::minmax(a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Candidate c;
    const auto& sa = d.nodes[key.first].classes;
    const auto& sb = d.nodes[key.second].classes;
    c.admissible = !opts.admissible || opts.admissible(sa, sb);
    if (c.admissible) {
      c.merged = detail::set_union(sa, sb);
      c.fitness = fitness(c.merged);
    }
    return cache.emplace(key, std::move(c)).first->second;
  };

  while (live.size() > 1) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    const Candidate* best_c = nullptr;
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        const auto& c = candidate(live[i], live[j]);
        if (!c.admissible) continue;
        if (best_c == nullptr || c.fitness > best_c->fitness ||
            (c.fitness == best_c->fitness && c.merged < best_c->merged)) {
          best = std::pair{i, j};
          best_c = &c;
        }
      }
    }
    if (!best) break;
    if (opts.policy == CutPolicy::threshold && best_c->fitness < opts.tau) break;

    const std::size_t a = live[best->first];
    const std::size_t b = live[best->second];
    d.nodes.push_back({best_c->merged, best_c->fitness, std::pair{a, b}});
    const std::size_t merged = d.nodes.size() - 1;
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(best->second));
    live[best->first] = merged;
  }
  d.roots = std::move(live);
  return d;
}

/// Partition of `items` into clusters, ordered lexicographically.
template <class Fitness>
std::vector<ClassSet> agglomerate(const ClassSet& items, Fitness&& fitness,
                                  const ClusterOptions& opts) {
  const Dendrogram d = build_dendrogram(items, fitness, opts);
  std::vector<ClassSet> clusters;
  if (opts.policy == CutPolicy::threshold) {
    for (auto r : d.roots) clusters.push_back(d.nodes[r].classes);
  } else {
    std::vector<std::size_t> stack(d.roots.begin(), d.roots.end());
    while (!stack.empty()) {
      const auto& node = d.nodes[stack.back()];
      stack.pop_back();
      if (!node.children) {
        clusters.push_back(node.classes);
        continue;
      }
      const auto [l, r] = *node.children;
      const double children_mean = (d.nodes[l].fitness + d.nodes[r].fitness) / 2.0;
      if (node.fitness >= children_mean) {
        clusters.push_back(node.classes);
      } else {
        stack.push_back(l);
        stack.push_back(r);
      }
    }
  }
  std::sort(clusters.begin(), clusters.end());
  return clusters;
}

/// Merge gate that only joins clusters linked by at least one dependency edge.
inline std::function<bool(const ClassSet&, const ClassSet&)> edge_adjacency(
    const DependencyGraph& graph) {
  return [&graph](const ClassSet& a, const ClassSet& b) {
    const ClassSet& small = a.size() <= b.size() ? a : b;
    const ClassSet& other = a.size() <= b.size() ? b : a;
    for (const auto& c : small)
      for (const auto& [nb, w] : graph.neighbors(c))
        if (other.contains(nb)) return true;
    return false;
  };
}

}  // namespace apimine
