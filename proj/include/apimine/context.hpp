#pragma once

#include <utility>

#include "apimine/metrics.hpp"
#include "apimine/model.hpp"

namespace apimine {

/// Immutable analysis context of one API: its class ids, the dependency
/// graph restricted to API-internal edges and the term space of its classes.
/// Safe to share between threads.
class ApiContext {
 public:
  explicit ApiContext(ClassModel api)
      : model_(std::move(api)),
        ids_(model_.class_ids()),
        graph_(DependencyGraph::within(dependency_graph(model_), ids_)),
        terms_(term_vectors(model_)) {}

  ApiContext(const ApiContext&) = delete;
  ApiContext& operator=(const ApiContext&) = delete;

  const ClassModel& model() const { return model_; }
  const std::string& name() const { return model_.name; }
  const ClassSet& class_ids() const { return ids_; }
  const DependencyGraph& graph() const { return graph_; }
  const TermSpace& terms() const { return terms_; }

 private:
  ClassModel model_;
  ClassSet ids_;
  DependencyGraph graph_;
  TermSpace terms_;
};

}  // namespace apimine
