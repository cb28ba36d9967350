#pragma once

// JSON, CSV and Graphviz renderings of stage outputs. Every renderer is a
// pure function of its input, so equal inputs give equal bytes.

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "apimine/compbuild.hpp"
#include "apimine/eval.hpp"
#include "apimine/fupmine.hpp"
#include "apimine/interfaces.hpp"
#include "apimine/usage.hpp"

namespace apimine {

using ojson = nlohmann::ordered_json;

inline std::string render(const ojson& doc) { return doc.dump(2) + "\n"; }

inline ojson optional_number(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

inline ojson to_json(std::span<const Transaction> ts) {
  ojson arr = ojson::array();
  for (const auto& t : ts)
    arr.push_back({{"client", t.origin.client}, {"component", t.origin.component}, {"items", t.items}});
  return arr;
}

inline ojson to_json(const Ratio& r) {
  return {{"count", r.count}, {"total", r.total}, {"value", std::round(r.value() * 1e4) / 1e4}};
}

inline ojson to_json(const FupResult& fups) {
  ojson patterns = ojson::array();
  for (const auto& p : fups.patterns)
    patterns.push_back({{"items", p.items}, {"support", to_json(p.support)}, {"attached", p.attached}});
  return {{"minsup", fups.minsup}, {"patterns", patterns}, {"uncovered", fups.uncovered}};
}

inline ojson to_json(std::span<const ProvidedInterface> ifaces) {
  ojson arr = ojson::array();
  for (const auto& i : ifaces)
    arr.push_back({{"pattern", i.source_pattern}, {"classes", i.classes}, {"fitness", i.fitness}});
  return arr;
}

/// Full record of one component, growth trace included.
inline ojson component_detail(const Component& c) {
  ojson trace = ojson::array();
  for (const auto& s : c.trace) trace.push_back({{"added", s.added}, {"quality", s.quality}});
  return {{"id", c.id},
          {"layer", c.layer},
          {"interface", c.interface_classes},
          {"internal", c.internal_classes},
          {"trace", trace},
          {"peak_index", c.peak_index},
          {"peak_quality", c.peak_quality},
          {"required", c.required}};
}

inline ojson to_json(std::span<const Component> comps) {
  ojson arr = ojson::array();
  for (const auto& c : comps) arr.push_back(component_detail(c));
  return arr;
}

inline ojson architecture_json(const LayeredArchitecture& arch) {
  auto entry = [](const Component& c) {
    return ojson{{"id", c.id},
                 {"interface", c.interface_classes},
                 {"internal", c.internal_classes},
                 {"required", c.required},
                 {"peak_quality", c.peak_quality}};
  };
  ojson layers = ojson::array();
  for (const auto& layer : arch.layers) {
    ojson l = ojson::array();
    for (const auto& c : layer) l.push_back(entry(c));
    layers.push_back(l);
  }
  ojson residual = ojson::array();
  for (const auto& c : arch.residual) residual.push_back(entry(c));
  return {{"api", arch.api}, {"layers", layers}, {"residual", residual}};
}

inline ojson to_json(const EvalReport& r) {
  ojson kfold = ojson::array();
  for (const auto& k : r.kfold) kfold.push_back({{"K", k.k}, {"meanReusability", optional_number(k.mean_reusability)}});
  return {{"apiClassCount", r.api_class_count},
          {"componentCount", r.component_count},
          {"usedClassCount", r.used_class_count},
          {"usedComponentCount", r.used_component_count},
          {"sizeRatio", r.size_ratio},
          {"usageRatio", optional_number(r.usage_ratio)},
          {"kfold", kfold},
          {"density", optional_number(r.density)},
          {"baselineDensity", optional_number(r.baseline_density)}};
}

/// One cluster per layer plus one for the residual components. An arrow
/// A -> B means some class of A depends on an interface class of B.
inline std::string architecture_dot(const LayeredArchitecture& arch, const DependencyGraph& graph) {
  std::string out = "digraph architecture {\n  rankdir=TB;\n  node [shape=box];\n";
  auto node = [](const Component& c) {
    return "    c" + std::to_string(c.id) + " [label=\"C" + std::to_string(c.id) + " (" +
           std::to_string(c.classes().size()) + " classes)\"];\n";
  };
  for (std::size_t l = 0; l < arch.layers.size(); ++l) {
    const std::string name = "layer_" + std::to_string(l + 1);
    out += "  subgraph cluster_" + name + " {\n    label=\"" + name + "\";\n";
    for (const auto& c : arch.layers[l]) out += node(c);
    out += "  }\n";
  }
  if (!arch.residual.empty()) {
    out += "  subgraph cluster_residual {\n    label=\"residual\";\n";
    for (const auto& c : arch.residual) out += node(c);
    out += "  }\n";
  }

  const auto comps = arch.components();
  std::set<std::pair<std::size_t, std::size_t>> arrows;
  for (const auto* a : comps) {
    const ClassSet own = a->classes();
    ClassSet targets;
    for (const auto& c : own)
      for (const auto& [t, w] : graph.successors(c))
        if (!own.contains(t)) targets.insert(t);
    for (const auto* b : comps) {
      if (a == b) continue;
      if (intersects(b->interface_classes, targets)) arrows.insert({a->id, b->id});
    }
  }
  for (const auto& [a, b] : arrows)
    out += "  c" + std::to_string(a) + " -> c" + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace apimine
