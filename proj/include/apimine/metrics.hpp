#pragma once

// Metric kernel: support, group cohesion (LCC), conceptual coupling, the
// interface fitness that combines them, and the component quality Q.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "apimine/error.hpp"
#include "apimine/model.hpp"

namespace apimine {

/// Weights for interface fitness (lambda: cohesion, coupling, support) and
/// component quality (mu: autonomy, specificity, composability), plus the
/// clustering stop threshold.
struct WeightConfig {
  std::array<double, 3> lambda{1.0, 1.0, 1.0};
  std::array<double, 3> mu{1.0, 1.0, 1.0};
  double tau = 0.5;

  void validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    for (double l : lambda)
      if (!in_unit(l)) throw ConfigError("lambda weights must lie in [0,1]");
    for (double m : mu)
      if (!in_unit(m)) throw ConfigError("mu weights must lie in [0,1]");
    if (lambda[0] + lambda[1] + lambda[2] <= 0.0)
      throw ConfigError("lambda weights must not all be zero");
    if (mu[0] + mu[1] + mu[2] <= 0.0) throw ConfigError("mu weights must not all be zero");
    if (!in_unit(tau)) throw ConfigError("tau must lie in [0,1]");
  }
};

/// Exact count/total fraction. Ordering compares the rationals exactly.
struct Ratio {
  std::uint64_t count = 0;
  std::uint64_t total = 1;

  double value() const { return static_cast<double>(count) / static_cast<double>(total); }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.count * b.total == b.count * a.total;
  }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    return a.count * b.total <=> b.count * a.total;
  }
};

/// True when count/total >= threshold. The threshold is read as the
/// shortest decimal that round-trips to it ("0.45" is 45/100, not the
/// nearest binary double), and the comparison is done in exact integers.
inline bool meets_threshold(std::uint64_t count, std::uint64_t total, double threshold) {
  if (threshold <= 0.0) return true;
  if (threshold > 1.0 || count == 0) return false;
  using u128 = unsigned __int128;
  char buf[400];
  const auto res = std::to_chars(buf, buf + sizeof buf, threshold, std::chars_format::fixed);
  u128 num = 0, den = 1;
  bool fraction = false, exact = res.ec == std::errc{};
  for (const char* p = buf; exact && p != res.ptr; ++p) {
    if (*p == '.') {
      fraction = true;
      continue;
    }
    num = num * 10 + static_cast<unsigned>(*p - '0');
    if (fraction) den *= 10;
    if (den > u128{1'000'000'000'000'000'000ULL}) exact = false;
  }
  if (exact) return u128{count} * den >= num * u128{total};

  // More than 18 decimals: compare against the binary value instead.
  int exp = 0;
  const double frac = std::frexp(threshold, &exp);  // threshold = frac * 2^exp
  const auto mantissa = static_cast<u128>(std::ldexp(frac, 53));
  const int shift = 53 - exp;
  if (shift >= 100) return true;  // threshold * total < 1 <= count
  return (u128{count} << shift) >= mantissa * total;
}

// ---------------------------------------------------------------------------
// Support

/// Fraction of transactions containing every class of `e`. Throws when there
/// are no transactions.
inline Ratio support_ratio(const ClassSet& e, std::span<const ClassSet> transactions) {
  if (transactions.empty()) throw Error("no transactions: support is undefined");
  std::uint64_t hits = 0;
  for (const auto& t : transactions)
    if (std::includes(t.begin(), t.end(), e.begin(), e.end())) ++hits;
  return {hits, transactions.size()};
}

inline double support(const ClassSet& e, std::span<const ClassSet> transactions) {
  return support_ratio(e, transactions).value();
}

// ---------------------------------------------------------------------------
// Cohesion

/// Group LCC: share of member pairs joined by a path of dependency edges
/// (any kind, either direction) that stays inside the group.
inline double lcc(const ClassSet& e, const DependencyGraph& graph) {
  const std::size_t n = e.size();
  if (n <= 1) return 1.0;
  std::vector<ClassId> members(e.begin(), e.end());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [nb, w] : graph.neighbors(members[i])) {
      auto it = std::lower_bound(members.begin(), members.end(), nb);
      if (it == members.end() || *it != nb) continue;
      parent[root(i)] = root(static_cast<std::size_t>(it - members.begin()));
    }
  }
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t i = 0; i < n; ++i) ++sizes[root(i)];
  double connected = 0.0;
  for (const auto& [r, s] : sizes) connected += static_cast<double>(s * (s - 1)) / 2.0;
  return connected / (static_cast<double>(n * (n - 1)) / 2.0);
}

// ---------------------------------------------------------------------------
// Lexical similarity

inline double cosine(const TermVector& a, const TermVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, c] : a.terms) {
    na += static_cast<double>(c) * c;
    auto it = b.terms.find(t);
    if (it != b.terms.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [t, c] : b.terms) nb += static_cast<double>(c) * c;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Term vectors of a class universe with all pairwise cosines precomputed.
/// Immutable after construction.
class TermSpace {
 public:
  TermSpace() = default;

  explicit TermSpace(std::map<ClassId, TermVector> vectors) : vectors_(std::move(vectors)) {
    ids_.reserve(vectors_.size());
    for (const auto& [id, v] : vectors_) ids_.push_back(id);
    const std::size_t n = ids_.size();
    cosines_.assign(n * n, 0.0);
    std::vector<const TermVector*> vs;
    for (const auto& [id, v] : vectors_) vs.push_back(&v);
    for (std::size_t i = 0; i < n; ++i) {
      cosines_[i * n + i] = vs[i]->empty() ? 0.0 : 1.0;
      for (std::size_t j = i + 1; j < n; ++j)
        cosines_[i * n + j] = cosines_[j * n + i] = apimine::cosine(*vs[i], *vs[j]);
    }
  }

  const std::map<ClassId, TermVector>& vectors() const { return vectors_; }

  /// 0 for ids that are not part of the space.
  double cosine(const ClassId& a, const ClassId& b) const {
    auto ia = index(a), ib = index(b);
    if (ia == npos || ib == npos) return 0.0;
    return cosines_[ia * ids_.size() + ib];
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t index(const ClassId& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    return it != ids_.end() && *it == id ? static_cast<std::size_t>(it - ids_.begin()) : npos;
  }

  std::map<ClassId, TermVector> vectors_;
  std::vector<ClassId> ids_;
  std::vector<double> cosines_;
};

/// Mean cosine similarity over unordered member pairs; 1 for a singleton.
inline double conceptual_coupling(const ClassSet& e, const TermSpace& terms) {
  if (e.size() <= 1) return 1.0;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (auto i = e.begin(); i != e.end(); ++i) {
    for (auto j = std::next(i); j != e.end(); ++j) {
      sum += terms.cosine(*i, *j);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Interface fitness

struct InterfaceContext {
  const DependencyGraph& graph;
  const TermSpace& terms;
  std::span<const ClassSet> transactions;
};

/// Normalised weighted sum of already-computed cohesion, coupling and support.
namespace detail {

/// Normalising the weights before summing keeps a single nonzero weight
/// exact: w/w is 1 and the other terms vanish.
inline double weighted_mean(const std::array<double, 3>& w, double a, double b, double c) {
  const double total = w[0] + w[1] + w[2];
  return (w[0] / total) * a + (w[1] / total) * b + (w[2] / total) * c;
}

}  // namespace detail

inline double combine_fitness(double cohesion, double coupling, double supp,
                              const WeightConfig& w) {
  return detail::weighted_mean(w.lambda, cohesion, coupling, supp);
}

inline double interface_fitness(const ClassSet& e, const InterfaceContext& ctx,
                                const WeightConfig& w) {
  return combine_fitness(lcc(e, ctx.graph), conceptual_coupling(e, ctx.terms),
                         support(e, ctx.transactions), w);
}

// ---------------------------------------------------------------------------
// Component quality

struct QualityTerms {
  double autonomy = 1.0;
  double specificity = 1.0;
  double composability = 1.0;
};

/// autonomy: internal edge weight over weight of all edges touching the group.
/// specificity: conceptual coupling of the group.
/// composability: 1 - (members with an edge crossing the boundary) / size.
inline QualityTerms quality_terms(const ClassSet& e, const DependencyGraph& graph,
                                  const TermSpace& terms) {
  QualityTerms q;
  double internal2 = 0.0;  // internal weight, counted once from each end
  double external = 0.0;
  std::size_t boundary = 0;
  for (const auto& c : e) {
    bool crosses = false;
    for (const auto& [nb, w] : graph.neighbors(c)) {
      if (e.contains(nb)) {
        internal2 += w;
      } else {
        external += w;
        crosses = true;
      }
    }
    if (crosses) ++boundary;
  }
  const double internal = internal2 / 2.0;
  q.autonomy = internal + external == 0.0 ? 1.0 : internal / (internal + external);
  q.specificity = conceptual_coupling(e, terms);
  q.composability = e.empty() ? 1.0
                              : 1.0 - static_cast<double>(boundary) / static_cast<double>(e.size());
  return q;
}

inline double component_quality(const ClassSet& e, const DependencyGraph& graph,
                                 const TermSpace& terms, const WeightConfig& w) {
  const auto q = quality_terms(e, graph, terms);
  return detail::weighted_mean(w.mu, q.autonomy, q.specificity, q.composability);
}

/// The single evaluation point for component quality used by growth and
/// clustering. Swap the function to try another quality model.
using QualityFunction = std::function<double(const ClassSet&)>;

inline QualityFunction make_component_quality(const DependencyGraph& graph,
                                              const TermSpace& terms, WeightConfig w) {
  return [&graph, &terms, w](const ClassSet& e) {
    return component_quality(e, graph, terms, w);
  };
}

}  // namespace apimine
