#pragma once

// End-to-end mining: clients -> transactions -> patterns -> interfaces ->
// first-layer components -> layered architecture.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "apimine/compbuild.hpp"
#include "apimine/context.hpp"
#include "apimine/error.hpp"
#include "apimine/fupmine.hpp"
#include "apimine/interfaces.hpp"
#include "apimine/usage.hpp"

namespace apimine {

struct PipelineOptions {
  double minsup = 0.45;
  WeightConfig weights;
  std::optional<std::size_t> growth_cap;
  std::size_t jobs = 1;

  void validate() const {
    if (!(minsup > 0.0 && minsup <= 1.0))
      throw ConfigError("minsup must lie in (0,1], got " + std::to_string(minsup));
    weights.validate();
  }
};

struct PipelineResult {
  std::vector<Transaction> transactions;
  FupResult fups;
  std::vector<ProvidedInterface> interfaces;
  std::vector<Component> first_layer;
  LayeredArchitecture architecture;
};

namespace detail {

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace detail

/// Rejects models that are not pipeline-ready: wrong kind, dangling
/// references or broken invariants. Client names must be unique.
inline void check_inputs(const ClassModel& api, std::span<const ClassModel> clients) {
  detail::run_stage("model", [&] {
    if (api.kind != ModelKind::api) throw Error("'" + api.name + "' is not an api model");
    auto report = [](const ClassModel& m, const std::vector<Issue>& issues) {
      if (issues.empty()) return;
      const auto& i = issues.front();
      throw Error("'" + m.name + "' has " + std::to_string(issues.size()) + " issue(s), first: " +
                  std::string(to_string(i.kind)) + " at " + i.location + " (" + i.detail + ")");
    };
    report(api, validate(api));
    std::set<std::string> names;
    for (const auto& c : clients) {
      if (c.kind != ModelKind::client) throw Error("'" + c.name + "' is not a client model");
      if (!names.insert(c.name).second) throw Error("duplicate client name '" + c.name + "'");
      report(c, validate(c, &api));
    }
    return 0;
  });
}

/// Runs every mining stage. Errors are rethrown as StageError naming the
/// stage that failed.
inline PipelineResult mine_architecture(const ApiContext& api, std::span<const ClassModel> clients,
                                        const PipelineOptions& opts) {
  detail::run_stage("config", [&] {
    opts.validate();
    return 0;
  });
  const auto& w = opts.weights;
  PipelineResult r;
  r.transactions = detail::run_stage("transactions", [&] {
    auto ts = extract_transactions(clients, api.model(), w, opts.jobs);
    if (ts.empty()) throw Error("no transactions: no client component uses the API");
    return ts;
  });
  const auto items = transaction_items(r.transactions);
  r.fups = detail::run_stage("mine", [&] {
    return assign_rare_classes(mine_patterns(items, opts.minsup), items);
  });
  r.interfaces = detail::run_stage("interfaces", [&] {
    const InterfaceContext ctx{api.graph(), api.terms(), items};
    return identify_interfaces(r.fups.patterns, ctx, w, opts.jobs);
  });
  const GrowthOptions growth{opts.growth_cap, opts.jobs};
  r.first_layer = detail::run_stage("components", [&] {
    return grow_first_layer(r.interfaces, api, w, growth);
  });
  r.architecture = detail::run_stage("layers", [&] {
    return build_layers(r.first_layer, api, w, growth);
  });
  return r;
}

}  // namespace apimine
