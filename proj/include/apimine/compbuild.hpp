#pragma once

// Component growth around provided interfaces and usage-driven layering.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "apimine/cluster.hpp"
#include "apimine/context.hpp"
#include "apimine/interfaces.hpp"
#include "apimine/metrics.hpp"
#include "apimine/parallel.hpp"

namespace apimine {

struct TraceStep {
  ClassId added;
  double quality = 0.0;
};

struct Component {
  std::size_t id = 0;
  int layer = 1;
  ClassSet interface_classes;
  ClassSet internal_classes;
  /// Every greedy addition, including those past the peak.
  std::vector<TraceStep> trace;
  /// Number of trace steps kept in the component.
  std::size_t peak_index = 0;
  double peak_quality = 0.0;
  ClassSet required;

  ClassSet classes() const {
    ClassSet all = interface_classes;
    all.insert(internal_classes.begin(), internal_classes.end());
    return all;
  }
};

struct PeakSelection {
  std::size_t prefix_length = 0;
  double quality = 0.0;
};

/// Earliest maximum over the starting quality and every trace prefix.
inline PeakSelection select_peak(double initial, std::span<const TraceStep> trace) {
  PeakSelection best{0, initial};
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].quality > best.quality) best = {i + 1, trace[i].quality};
  }
  return best;
}

/// Greedy growth: repeatedly add the edge-connected outside class that
/// maximises quality (ties: smallest id) until no candidate is left or the
/// trace reaches `cap`. The component keeps the additions up to the quality
/// peak.
template <class Quality>
Component grow_component(const ClassSet& interface_classes, const DependencyGraph& graph,
                         Quality&& quality, std::optional<std::size_t> cap = std::nullopt) {
  Component comp;
  comp.interface_classes = interface_classes;
  ClassSet current = interface_classes;
  const double initial = quality(current);

  ClassSet candidates;
  auto add_neighbors = [&](const ClassId& c) {
    for (const auto& [nb, w] : graph.neighbors(c))
      if (!current.contains(nb)) candidates.insert(nb);
  };
  for (const auto& c : current) add_neighbors(c);

  while (!candidates.empty() && (!cap || comp.trace.size() < *cap)) {
    const ClassId* best = nullptr;
    double best_q = 0.0;
    for (const auto& cand : candidates) {
      ClassSet trial = current;
      trial.insert(cand);
      const double q = quality(trial);
      if (best == nullptr || q > best_q) {
        best = &cand;
        best_q = q;
      }
    }
    const ClassId chosen = *best;
    candidates.erase(chosen);
    current.insert(chosen);
    add_neighbors(chosen);
    comp.trace.push_back({chosen, best_q});
  }

  const auto peak = select_peak(initial, comp.trace);
  comp.peak_index = peak.prefix_length;
  comp.peak_quality = peak.quality;
  for (std::size_t i = 0; i < peak.prefix_length; ++i)
    comp.internal_classes.insert(comp.trace[i].added);
  return comp;
}

inline Component grow_component(const ProvidedInterface& iface, const ApiContext& api,
                                const WeightConfig& w,
                                std::optional<std::size_t> cap = std::nullopt) {
  return grow_component(iface.classes, api.graph(),
                        make_component_quality(api.graph(), api.terms(), w), cap);
}

/// Targets of edges leaving the component, minus classes already provided by
/// identified components.
inline ClassSet required_interfaces(const Component& comp, const DependencyGraph& graph,
                                    const ClassSet& provided) {
  const ClassSet own = comp.classes();
  ClassSet req;
  for (const auto& c : own)
    for (const auto& [t, w] : graph.successors(c))
      if (!own.contains(t) && !provided.contains(t)) req.insert(t);
  return req;
}

/// Members referenced from outside the cluster; all members when nothing
/// outside points in.
inline ClassSet entry_classes(const ClassSet& cluster, const DependencyGraph& graph) {
  ClassSet entries;
  for (const auto& c : cluster)
    for (const auto& [src, w] : graph.predecessors(c))
      if (!cluster.contains(src)) {
        entries.insert(c);
        break;
      }
  return entries.empty() ? cluster : entries;
}

/// Component made of a whole cluster, with no growth step.
inline Component cluster_component(const ClassSet& cluster, const DependencyGraph& graph,
                                   const QualityFunction& quality) {
  Component comp;
  comp.interface_classes = entry_classes(cluster, graph);
  for (const auto& c : cluster)
    if (!comp.interface_classes.contains(c)) comp.internal_classes.insert(c);
  comp.peak_quality = quality(cluster);
  return comp;
}

/// Quality-cut clustering of `classes` into standalone components; merges
/// only join edge-linked clusters.
inline std::vector<Component> cluster_components(const ClassSet& classes, const ApiContext& api,
                                                 const WeightConfig& w) {
  const auto quality = make_component_quality(api.graph(), api.terms(), w);
  ClusterOptions opts;
  opts.policy = CutPolicy::quality_cut;
  opts.tau = w.tau;
  opts.admissible = edge_adjacency(api.graph());
  std::vector<Component> out;
  for (const auto& cluster : agglomerate(classes, quality, opts))
    out.push_back(cluster_component(cluster, api.graph(), quality));
  return out;
}

struct LayeredArchitecture {
  std::string api;
  std::vector<std::vector<Component>> layers;
  std::vector<Component> residual;

  std::vector<const Component*> components() const {
    std::vector<const Component*> all;
    for (const auto& layer : layers)
      for (const auto& c : layer) all.push_back(&c);
    for (const auto& c : residual) all.push_back(&c);
    return all;
  }

  std::size_t component_count() const { return components().size(); }
};

struct GrowthOptions {
  std::optional<std::size_t> cap;
  std::size_t jobs = 1;
};

/// Grows one component per distinct interface class set, in input order.
inline std::vector<Component> grow_first_layer(std::span<const ProvidedInterface> interfaces,
                                               const ApiContext& api, const WeightConfig& w,
                                               const GrowthOptions& opts = {}) {
  std::vector<const ProvidedInterface*> unique;
  std::set<ClassSet> seen;
  for (const auto& iface : interfaces)
    if (seen.insert(iface.classes).second) unique.push_back(&iface);
  auto comps = parallel_map(opts.jobs, unique.size(), [&](std::size_t i) {
    return grow_component(*unique[i], api, w, opts.cap);
  });
  for (auto& c : comps) c.layer = 1;
  return comps;
}

/// Builds layers 2..N from the required interfaces of the previous layer, then
/// clusters every class left uncovered into a trailing residual layer.
///
/// Layer L's provided classes are the classes required by layer L-1 that no
/// identified component provides yet. They are clustered by interface fitness,
/// with support measured over the required sets of the layer L-1 components,
/// and each cluster is grown into a component. The loop ends when a layer
/// requires nothing new.
inline LayeredArchitecture build_layers(std::vector<Component> first_layer, const ApiContext& api,
                                        const WeightConfig& w, const GrowthOptions& opts = {}) {
  LayeredArchitecture arch;
  arch.api = api.name();
  const auto& graph = api.graph();

  ClassSet provided;
  for (auto& c : first_layer) {
    c.layer = 1;
    provided.insert(c.interface_classes.begin(), c.interface_classes.end());
  }
  if (!first_layer.empty()) arch.layers.push_back(std::move(first_layer));

  while (!arch.layers.empty()) {
    auto& prev = arch.layers.back();
    ClassSet needed;
    std::vector<ClassSet> pseudo_transactions;
    for (auto& c : prev) {
      c.required = required_interfaces(c, graph, provided);
      if (c.required.empty()) continue;
      needed.insert(c.required.begin(), c.required.end());
      pseudo_transactions.push_back(c.required);
    }
    if (needed.empty()) break;

    const InterfaceContext ctx{graph, api.terms(), pseudo_transactions};
    auto fitness = [&](const ClassSet& e) { return interface_fitness(e, ctx, w); };
    ClusterOptions copts;
    copts.policy = CutPolicy::threshold;
    copts.tau = w.tau;
    const auto groups = agglomerate(needed, fitness, copts);

    const int layer_index = static_cast<int>(arch.layers.size()) + 1;
    auto next = parallel_map(opts.jobs, groups.size(), [&](std::size_t i) {
      ProvidedInterface iface{groups[i], 0, fitness(groups[i])};
      return grow_component(iface, api, w, opts.cap);
    });
    for (auto& c : next) c.layer = layer_index;
    provided.insert(needed.begin(), needed.end());
    arch.layers.push_back(std::move(next));
  }

  ClassSet covered;
  for (const auto& layer : arch.layers)
    for (const auto& c : layer) {
      const auto cls = c.classes();
      covered.insert(cls.begin(), cls.end());
    }
  ClassSet leftover;
  for (const auto& id : api.class_ids())
    if (!covered.contains(id)) leftover.insert(id);
  if (!leftover.empty()) {
    const int residual_layer = static_cast<int>(arch.layers.size()) + 1;
    arch.residual = cluster_components(leftover, api, w);
    for (auto& c : arch.residual) {
      c.layer = residual_layer;
      provided.insert(c.interface_classes.begin(), c.interface_classes.end());
    }
    for (auto& c : arch.residual) c.required = required_interfaces(c, graph, provided);
  }

  std::size_t next_id = 0;
  for (auto& layer : arch.layers)
    for (auto& c : layer) c.id = next_id++;
  for (auto& c : arch.residual) c.id = next_id++;
  return arch;
}

}  // namespace apimine
