#pragma once

// Evaluation harnesses: understandability ratios, K-fold reusability and
// provided-interface usage density against a usage-free baseline.

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "apimine/compbuild.hpp"
#include "apimine/error.hpp"
#include "apimine/pipeline.hpp"
#include "apimine/usage.hpp"

namespace apimine {

inline double size_ratio(std::size_t components, std::size_t classes) {
  if (classes == 0) throw Error("size ratio of an empty API");
  return static_cast<double>(components) / static_cast<double>(classes);
}

/// Absent when no class is used.
inline std::optional<double> usage_ratio(std::size_t used_components, std::size_t used_classes) {
  if (used_classes == 0) return std::nullopt;
  return static_cast<double>(used_components) / static_cast<double>(used_classes);
}

inline ClassSet used_classes(std::span<const Transaction> transactions) {
  ClassSet used;
  for (const auto& t : transactions) used.insert(t.items.begin(), t.items.end());
  return used;
}

inline bool intersects(const ClassSet& a, const ClassSet& b) {
  for (const auto& c : a)
    if (b.contains(c)) return true;
  return false;
}

struct Understandability {
  std::size_t api_classes = 0;
  std::size_t components = 0;
  std::size_t used_classes = 0;
  std::size_t used_components = 0;
  double size_ratio = 0.0;
  std::optional<double> usage_ratio;
};

/// A component counts as used when a transaction references one of its
/// interface classes.
inline Understandability understandability(const LayeredArchitecture& arch,
                                           std::span<const Transaction> transactions,
                                           std::size_t api_class_count) {
  Understandability u;
  u.api_classes = api_class_count;
  const auto comps = arch.components();
  u.components = comps.size();
  const ClassSet used = used_classes(transactions);
  u.used_classes = used.size();
  for (const auto* c : comps)
    if (intersects(c->interface_classes, used)) ++u.used_components;
  u.size_ratio = size_ratio(u.components, u.api_classes);
  u.usage_ratio = usage_ratio(u.used_components, u.used_classes);
  return u;
}

namespace detail {

template <class Touched, class Score>
std::optional<double> mean_over_touched(std::span<const Component* const> comps,
                                        bool untouched_as_zero, Touched&& touched,
                                        Score&& score) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto* c : comps) {
    if (touched(*c)) {
      sum += score(*c);
      ++n;
    } else if (untouched_as_zero) {
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

inline double share_used(const ClassSet& classes, const ClassSet& used) {
  std::size_t hit = 0;
  for (const auto& c : classes)
    if (used.contains(c)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(classes.size());
}

}  // namespace detail

/// Mean over touched components of |used component classes| / |component
/// classes|. With `untouched_as_zero`, untouched components contribute 0.
inline std::optional<double> mean_reusability(std::span<const Component* const> comps,
                                              const ClassSet& used,
                                              bool untouched_as_zero = false) {
  return detail::mean_over_touched(
      comps, untouched_as_zero, [&](const Component& c) { return intersects(c.classes(), used); },
      [&](const Component& c) { return detail::share_used(c.classes(), used); });
}

/// Mean over used components (an interface class referenced) of |used
/// interface classes| / |interface classes|.
inline std::optional<double> mean_interface_density(std::span<const Component* const> comps,
                                                    const ClassSet& used,
                                                    bool untouched_as_zero = false) {
  return detail::mean_over_touched(
      comps, untouched_as_zero,
      [&](const Component& c) { return intersects(c.interface_classes, used); },
      [&](const Component& c) { return detail::share_used(c.interface_classes, used); });
}

/// Usage-free reference decomposition: the whole API clustered by component
/// quality alone.
inline std::vector<Component> baseline_components(const ApiContext& api, const WeightConfig& w) {
  auto comps = cluster_components(api.class_ids(), api, w);
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i].id = i;
  return comps;
}

/// Seeded Fisher-Yates shuffle of 0..n-1 cut into k folds whose sizes differ
/// by at most one.
inline std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                         std::uint64_t seed) {
  if (k < 2) throw ConfigError("K must be at least 2");
  if (k > n)
    throw ConfigError("K = " + std::to_string(k) + " exceeds the number of clients (" +
                      std::to_string(n) + ")");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  return folds;
}

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_clients = 0;
  std::size_t test_clients = 0;
  std::optional<double> reusability;
  std::optional<double> density;
  std::optional<double> baseline_density;
};

struct KFoldResult {
  std::size_t k = 0;
  std::vector<FoldResult> folds;
  std::optional<double> mean_reusability;
  std::optional<double> mean_density;
  std::optional<double> mean_baseline_density;
};

struct KFoldOptions {
  std::size_t k = 4;
  std::uint64_t seed = 42;
  bool untouched_as_zero = false;
};

namespace detail {

inline std::optional<double> mean_present(const std::vector<FoldResult>& folds,
                                          std::optional<double> FoldResult::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : folds)
    if (f.*field) {
      sum += *(f.*field);
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace detail

/// K trials; each mines the architecture from K-1 folds of clients and scores
/// it on the transactions of the held-out fold. Also scores the baseline
/// decomposition on the same held-out transactions.
inline KFoldResult reusability_kfold(const ApiContext& api, std::span<const ClassModel> clients,
                                     const PipelineOptions& opts, const KFoldOptions& kopts) {
  const auto folds = kfold_split(clients.size(), kopts.k, kopts.seed);
  const auto baseline = baseline_components(api, opts.weights);
  std::vector<const Component*> baseline_ptrs;
  for (const auto& c : baseline) baseline_ptrs.push_back(&c);

  PipelineOptions inner = opts;
  inner.jobs = 1;
  KFoldResult result;
  result.k = kopts.k;
  result.folds = parallel_map(opts.jobs, folds.size(), [&](std::size_t f) {
    std::vector<ClassModel> train, test;
    for (std::size_t g = 0; g < folds.size(); ++g)
      for (std::size_t i : folds[g]) (g == f ? test : train).push_back(clients[i]);

    FoldResult fr;
    fr.fold = f;
    fr.train_clients = train.size();
    fr.test_clients = test.size();
    const auto mined = mine_architecture(api, train, inner);
    const auto test_ts = extract_transactions(test, api.model(), opts.weights);
    const ClassSet used = used_classes(test_ts);
    const auto comps = mined.architecture.components();
    fr.reusability = mean_reusability(comps, used, kopts.untouched_as_zero);
    fr.density = mean_interface_density(comps, used, kopts.untouched_as_zero);
    fr.baseline_density = mean_interface_density(baseline_ptrs, used, kopts.untouched_as_zero);
    return fr;
  });
  result.mean_reusability = detail::mean_present(result.folds, &FoldResult::reusability);
  result.mean_density = detail::mean_present(result.folds, &FoldResult::density);
  result.mean_baseline_density = detail::mean_present(result.folds, &FoldResult::baseline_density);
  return result;
}

struct KFoldSummary {
  std::size_t k = 0;
  std::optional<double> mean_reusability;
};

struct EvalReport {
  std::size_t api_class_count = 0;
  std::size_t component_count = 0;
  std::size_t used_class_count = 0;
  std::size_t used_component_count = 0;
  double size_ratio = 0.0;
  std::optional<double> usage_ratio;
  std::vector<KFoldSummary> kfold;
  std::optional<double> density;
  std::optional<double> baseline_density;
};

inline EvalReport make_report(const Understandability& u, const std::vector<KFoldResult>& runs) {
  EvalReport r;
  r.api_class_count = u.api_classes;
  r.component_count = u.components;
  r.used_class_count = u.used_classes;
  r.used_component_count = u.used_components;
  r.size_ratio = u.size_ratio;
  r.usage_ratio = u.usage_ratio;
  for (const auto& run : runs) r.kfold.push_back({run.k, run.mean_reusability});
  if (!runs.empty()) {
    r.density = runs.front().mean_density;
    r.baseline_density = runs.front().mean_baseline_density;
  }
  return r;
}

}  // namespace apimine
