#pragma once

// Language-neutral class model for an API or one of its clients, plus the
// two views the pipeline derives from it: class-level dependency edges and
// identifier term vectors.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace apimine {

using ClassId = std::string;
using ClassSet = std::set<ClassId>;

enum class ModelKind { api, client };
enum class Visibility { public_, protected_, private_, package };

struct MethodCall {
  ClassId target;
  std::string method;
  bool operator==(const MethodCall&) const = default;
};

struct AttributeAccess {
  ClassId target;
  std::string attribute;
  bool operator==(const AttributeAccess&) const = default;
};

struct Attribute {
  std::string name;
  std::string type;
  bool operator==(const Attribute&) const = default;
};

struct MethodDecl {
  std::string name;
  Visibility visibility = Visibility::public_;
  std::vector<std::string> params;
  std::vector<MethodCall> calls;
  std::vector<AttributeAccess> accesses;
  std::vector<ClassId> instantiates;
  bool operator==(const MethodDecl&) const = default;
};

struct ClassDecl {
  ClassId id;
  std::string package;
  std::vector<Attribute> attributes;
  std::vector<MethodDecl> methods;
  std::vector<ClassId> extends;
  std::vector<ClassId> implements;

  /// Last segment of the fully-qualified id.
  std::string_view simple_name() const {
    std::string_view v = id;
    auto dot = v.rfind('.');
    return dot == std::string_view::npos ? v : v.substr(dot + 1);
  }

  bool operator==(const ClassDecl&) const = default;
};

struct ClassModel {
  std::string name;
  ModelKind kind = ModelKind::api;
  std::vector<ClassDecl> classes;

  ClassSet class_ids() const {
    ClassSet ids;
    for (const auto& c : classes) ids.insert(c.id);
    return ids;
  }

  const ClassDecl* find(std::string_view id) const {
    for (const auto& c : classes)
      if (c.id == id) return &c;
    return nullptr;
  }

  bool operator==(const ClassModel&) const = default;
};

inline std::string_view to_string(ModelKind k) {
  return k == ModelKind::api ? "api" : "client";
}

inline std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::public_: return "public";
    case Visibility::protected_: return "protected";
    case Visibility::private_: return "private";
    case Visibility::package: return "package";
  }
  return "public";
}

// ---------------------------------------------------------------------------
// Validation

enum class IssueKind { dangling_reference, self_inheritance, duplicate_class,
                       duplicate_method, id_collision };

struct Issue {
  IssueKind kind;
  std::string location;
  std::string detail;
};

inline std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::dangling_reference: return "dangling-reference";
    case IssueKind::self_inheritance: return "self-inheritance";
    case IssueKind::duplicate_class: return "duplicate-class";
    case IssueKind::duplicate_method: return "duplicate-method";
    case IssueKind::id_collision: return "id-collision";
  }
  return "issue";
}

/// Referential-integrity and invariant check. For a client model, `context`
/// is the API it is analysed against; references may resolve in either.
/// An empty result means the model is ready for the pipeline.
inline std::vector<Issue> validate(const ClassModel& model,
                                   const ClassModel* context = nullptr) {
  std::vector<Issue> issues;
  ClassSet own;
  for (const auto& c : model.classes) {
    if (!own.insert(c.id).second)
      issues.push_back({IssueKind::duplicate_class, c.id, "class id declared twice"});
  }
  ClassSet external;
  if (context != nullptr) external = context->class_ids();

  auto check = [&](const std::string& where, const ClassId& target) {
    if (own.contains(target) || external.contains(target)) return;
    issues.push_back({IssueKind::dangling_reference, where,
                      "unresolved class '" + target + "'"});
  };

  for (const auto& c : model.classes) {
    if (model.kind == ModelKind::client && external.contains(c.id))
      issues.push_back({IssueKind::id_collision, c.id,
                        "client class shadows an API class"});
    for (const auto* parents : {&c.extends, &c.implements}) {
      for (const auto& p : *parents) {
        if (p == c.id)
          issues.push_back({IssueKind::self_inheritance, c.id, "class inherits from itself"});
        else
          check(c.id, p);
      }
    }
    std::set<std::pair<std::string, std::size_t>> signatures;
    for (const auto& m : c.methods) {
      const std::string where = c.id + "." + m.name;
      if (!signatures.emplace(m.name, m.params.size()).second)
        issues.push_back({IssueKind::duplicate_method, where,
                          "overload with arity " + std::to_string(m.params.size()) +
                              " declared twice"});
      for (const auto& call : m.calls) check(where, call.target);
      for (const auto& acc : m.accesses) check(where, acc.target);
      for (const auto& t : m.instantiates) check(where, t);
    }
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Dependency edges

// Declared in lexicographic order of their names so that enum order and
// name order agree.
enum class EdgeKind { access, call, inherit, instantiate };

inline std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::access: return "access";
    case EdgeKind::call: return "call";
    case EdgeKind::inherit: return "inherit";
    case EdgeKind::instantiate: return "instantiate";
  }
  return "call";
}

struct DependencyEdge {
  ClassId source;
  ClassId target;
  EdgeKind kind;
  int weight = 1;

  auto key() const { return std::tie(source, target, kind); }
  bool operator==(const DependencyEdge&) const = default;
};

/// One edge per (source, target, kind); weight counts member-level
/// occurrences. Self edges are dropped. Targets outside the model are kept,
/// which is how a client's API usage shows up.
inline std::vector<DependencyEdge> dependency_graph(const ClassModel& model) {
  std::map<std::tuple<ClassId, ClassId, EdgeKind>, int> weights;
  auto add = [&](const ClassId& s, const ClassId& t, EdgeKind k) {
    if (s != t) ++weights[{s, t, k}];
  };
  for (const auto& c : model.classes) {
    for (const auto& p : c.extends) add(c.id, p, EdgeKind::inherit);
    for (const auto& p : c.implements) add(c.id, p, EdgeKind::inherit);
    for (const auto& m : c.methods) {
      for (const auto& call : m.calls) add(c.id, call.target, EdgeKind::call);
      for (const auto& acc : m.accesses) add(c.id, acc.target, EdgeKind::access);
      for (const auto& t : m.instantiates) add(c.id, t, EdgeKind::instantiate);
    }
  }
  std::vector<DependencyEdge> edges;
  edges.reserve(weights.size());
  for (const auto& [key, w] : weights) {
    const auto& [s, t, k] = key;
    edges.push_back({s, t, k, w});
  }
  return edges;
}

/// Adjacency view over a set of dependency edges. Kinds are merged; the
/// undirected view sums the weight of edges in both directions.
class DependencyGraph {
 public:
  using Adjacency = std::map<ClassId, int>;

  DependencyGraph() = default;

  explicit DependencyGraph(std::vector<DependencyEdge> edges)
      : edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      out_[e.source][e.target] += e.weight;
      in_[e.target][e.source] += e.weight;
      undirected_[e.source][e.target] += e.weight;
      undirected_[e.target][e.source] += e.weight;
    }
  }

  /// Keeps only edges with both endpoints in `universe`.
  static DependencyGraph within(const std::vector<DependencyEdge>& edges,
                                const ClassSet& universe) {
    std::vector<DependencyEdge> kept;
    for (const auto& e : edges)
      if (universe.contains(e.source) && universe.contains(e.target)) kept.push_back(e);
    return DependencyGraph(std::move(kept));
  }

  const std::vector<DependencyEdge>& edges() const { return edges_; }
  const Adjacency& successors(const ClassId& id) const { return lookup(out_, id); }
  const Adjacency& predecessors(const ClassId& id) const { return lookup(in_, id); }
  const Adjacency& neighbors(const ClassId& id) const { return lookup(undirected_, id); }

  bool adjacent(const ClassId& a, const ClassId& b) const {
    return neighbors(a).contains(b);
  }

 private:
  static const Adjacency& lookup(const std::map<ClassId, Adjacency>& m, const ClassId& id) {
    static const Adjacency empty;
    auto it = m.find(id);
    return it == m.end() ? empty : it->second;
  }

  std::vector<DependencyEdge> edges_;
  std::map<ClassId, Adjacency> out_;
  std::map<ClassId, Adjacency> in_;
  std::map<ClassId, Adjacency> undirected_;
};

// ---------------------------------------------------------------------------
// Identifier terms

struct TermVector {
  std::map<std::string, int> terms;
  bool empty() const { return terms.empty(); }
  bool operator==(const TermVector&) const = default;
};

/// Splits an identifier into lowercase words at camel-case boundaries,
/// underscores, digits and any other non-letter. An upper-case run stays
/// whole unless its last capital starts a capitalised word ("HTTPServer" ->
/// http, server). Words shorter than two characters are dropped.
inline std::vector<std::string> split_identifier(std::string_view name) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (cur.size() > 1) words.push_back(cur);
    cur.clear();
  };
  auto is_upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto is_lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (!is_upper(c) && !is_lower(c)) {
      flush();
      continue;
    }
    if (is_upper(c) && i > 0 && !cur.empty()) {
      const char prev = name[i - 1];
      const bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
      if (is_lower(prev) || (is_upper(prev) && next_lower)) flush();
    }
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  flush();
  return words;
}

/// Terms of the class simple name, its method names and its attribute names.
inline TermVector term_vector(const ClassDecl& cls) {
  TermVector v;
  auto add = [&](std::string_view ident) {
    for (auto& w : split_identifier(ident)) ++v.terms[w];
  };
  add(cls.simple_name());
  for (const auto& m : cls.methods) add(m.name);
  for (const auto& a : cls.attributes) add(a.name);
  return v;
}

inline std::map<ClassId, TermVector> term_vectors(const ClassModel& model) {
  std::map<ClassId, TermVector> out;
  for (const auto& c : model.classes) out.emplace(c.id, term_vector(c));
  return out;
}

}  // namespace apimine
