#pragma once

#include <cstddef>
#include <vector>

#include "apimine/cluster.hpp"
#include "apimine/fupmine.hpp"
#include "apimine/metrics.hpp"
#include "apimine/parallel.hpp"

namespace apimine {

/// Classes forming the provided interface of one first-layer component.
struct ProvidedInterface {
  ClassSet classes;
  std::size_t source_pattern = 0;
  double fitness = 0.0;
};

/// Splits one pattern (items and attached classes alike) into interfaces by
/// threshold clustering on interface fitness.
inline std::vector<ProvidedInterface> partition_pattern(const Pattern& pattern,
                                                        std::size_t pattern_index,
                                                        const InterfaceContext& ctx,
                                                        const WeightConfig& w) {
  auto fitness = [&](const ClassSet& e) { return interface_fitness(e, ctx, w); };
  ClusterOptions opts;
  opts.policy = CutPolicy::threshold;
  opts.tau = w.tau;
  std::vector<ProvidedInterface> out;
  for (auto& group : agglomerate(pattern.classes(), fitness, opts)) {
    const double f = fitness(group);
    out.push_back({std::move(group), pattern_index, f});
  }
  return out;
}

/// Interfaces of every pattern, concatenated in pattern order. A class may
/// appear in interfaces of several patterns.
inline std::vector<ProvidedInterface> identify_interfaces(const std::vector<Pattern>& patterns,
                                                          const InterfaceContext& ctx,
                                                          const WeightConfig& w,
                                                          std::size_t jobs = 1) {
  auto per_pattern = parallel_map(jobs, patterns.size(), [&](std::size_t i) {
    return partition_pattern(patterns[i], i, ctx, w);
  });
  std::vector<ProvidedInterface> out;
  for (auto& group : per_pattern)
    for (auto& iface : group) out.push_back(std::move(iface));
  return out;
}

}  // namespace apimine
