#pragma once

// Client components and API-usage transactions.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apimine/cluster.hpp"
#include "apimine/error.hpp"
#include "apimine/metrics.hpp"
#include "apimine/model.hpp"
#include "apimine/parallel.hpp"

namespace apimine {

/// A functional group of classes inside one client application.
struct ClientComponent {
  std::string client;
  std::size_t id = 0;
  ClassSet classes;
};

struct Origin {
  std::string client;
  std::size_t component = 0;
  auto operator<=>(const Origin&) const = default;
};

/// API classes used by one client component.
struct Transaction {
  Origin origin;
  ClassSet items;
};

inline std::vector<ClassSet> transaction_items(std::span<const Transaction> ts) {
  std::vector<ClassSet> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(t.items);
  return out;
}

/// Clusters a client's classes into disjoint components using component
/// quality on the client's own (client-internal) dependency graph. Only
/// edge-linked clusters are merged, so a class without client-internal edges
/// is a component of its own.
inline std::vector<ClientComponent> partition_client(const ClassModel& client,
                                                     const WeightConfig& w) {
  if (client.classes.empty())
    throw Error("client '" + client.name + "' has no classes to partition");
  const ClassSet ids = client.class_ids();
  const DependencyGraph graph = DependencyGraph::within(dependency_graph(client), ids);
  const TermSpace terms(term_vectors(client));
  const auto quality = make_component_quality(graph, terms, w);

  ClusterOptions opts;
  opts.policy = CutPolicy::quality_cut;
  opts.tau = w.tau;
  opts.admissible = edge_adjacency(graph);

  std::vector<ClientComponent> out;
  for (auto& cluster : agglomerate(ids, quality, opts))
    out.push_back({client.name, out.size(), std::move(cluster)});
  return out;
}

/// API classes that `classes` reference through calls, attribute accesses,
/// inheritance or instantiation.
inline ClassSet used_api_classes(const std::vector<DependencyEdge>& client_edges,
                                 const ClassSet& classes, const ClassSet& api_ids) {
  ClassSet used;
  for (const auto& e : client_edges)
    if (classes.contains(e.source) && api_ids.contains(e.target)) used.insert(e.target);
  return used;
}

/// Transactions of one client, one per component that touches the API.
inline std::vector<Transaction> client_transactions(const ClassModel& client,
                                                    const ClassSet& api_ids,
                                                    const WeightConfig& w) {
  const auto edges = dependency_graph(client);
  std::vector<Transaction> out;
  for (const auto& comp : partition_client(client, w)) {
    ClassSet items = used_api_classes(edges, comp.classes, api_ids);
    if (!items.empty()) out.push_back({{client.name, comp.id}, std::move(items)});
  }
  return out;
}

/// Transactions of every client, ordered by (client name, component id).
/// Clients are processed independently on up to `jobs` threads.
inline std::vector<Transaction> extract_transactions(std::span<const ClassModel> clients,
                                                     const ClassModel& api,
                                                     const WeightConfig& w,
                                                     std::size_t jobs = 1) {
  const ClassSet api_ids = api.class_ids();
  auto per_client = parallel_map(jobs, clients.size(), [&](std::size_t i) {
    return client_transactions(clients[i], api_ids, w);
  });
  std::vector<Transaction> all;
  for (auto& ts : per_client)
    for (auto& t : ts) all.push_back(std::move(t));
  std::stable_sort(all.begin(), all.end(),
                   [](const Transaction& a, const Transaction& b) { return a.origin < b.origin; });
  return all;
}

}  // namespace apimine
