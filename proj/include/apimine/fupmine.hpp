#pragma once

// Frequent usage pattern mining.
//
// mine_frequent is FP-growth: items are ranked by descending frequency, every
// transaction is inserted into a prefix tree in rank order, and each item's
// conditional pattern base is mined recursively into a conditional tree.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "apimine/error.hpp"
#include "apimine/metrics.hpp"
#include "apimine/model.hpp"

namespace apimine {

struct FrequentItemset {
  ClassSet items;
  Ratio support;
};

/// Output order: descending support, then ascending size, then items.
inline bool frequent_order(const FrequentItemset& a, const FrequentItemset& b) {
  if (a.support != b.support) return a.support > b.support;
  if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
  return a.items < b.items;
}

namespace detail {

class FpTree {
 public:
  struct Node {
    int item = -1;
    std::uint64_t count = 0;
    int parent = -1;
    std::map<int, int> children;
  };

  FpTree() { nodes_.push_back({}); }

  /// `path` must be sorted by ascending rank (most frequent first).
  void insert(const std::vector<int>& path, std::uint64_t count) {
    int cur = 0;
    for (int item : path) {
      auto& kids = nodes_[static_cast<std::size_t>(cur)].children;
      auto it = kids.find(item);
      int next;
      if (it == kids.end()) {
        next = static_cast<int>(nodes_.size());
        kids.emplace(item, next);
        nodes_.push_back({item, 0, cur, {}});
        header_[item].push_back(next);
      } else {
        next = it->second;
      }
      nodes_[static_cast<std::size_t>(next)].count += count;
      cur = next;
    }
  }

  const std::map<int, std::vector<int>>& header() const { return header_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<Node> nodes_;
  std::map<int, std::vector<int>> header_;  // item rank -> nodes holding it
};

struct WeightedPath {
  std::vector<int> items;  // ascending rank
  std::uint64_t count;
};

inline void fp_growth(const std::vector<WeightedPath>& base, std::uint64_t min_count,
                      std::vector<int>& suffix,
                      std::vector<std::pair<std::vector<int>, std::uint64_t>>& out) {
  std::map<int, std::uint64_t> freq;
  for (const auto& p : base)
    for (int item : p.items) freq[item] += p.count;

  FpTree tree;
  for (const auto& p : base) {
    std::vector<int> kept;
    for (int item : p.items)
      if (freq[item] >= min_count) kept.push_back(item);
    if (!kept.empty()) tree.insert(kept, p.count);
  }

  // Least frequent (highest rank) first.
  for (auto it = tree.header().rbegin(); it != tree.header().rend(); ++it) {
    const int item = it->first;
    const std::uint64_t total = freq[item];
    if (total < min_count) continue;
    suffix.push_back(item);
    out.emplace_back(suffix, total);

    std::vector<WeightedPath> conditional;
    for (int n : it->second) {
      const auto& leaf = tree.node(n);
      std::vector<int> prefix;
      for (int p = leaf.parent; p > 0; p = tree.node(p).parent) prefix.push_back(tree.node(p).item);
      if (prefix.empty()) continue;
      std::reverse(prefix.begin(), prefix.end());
      conditional.push_back({std::move(prefix), leaf.count});
    }
    if (!conditional.empty()) fp_growth(conditional, min_count, suffix, out);
    suffix.pop_back();
  }
}

}  // namespace detail

namespace detail {

inline void check_mining_input(std::span<const ClassSet> transactions, double minsup) {
  if (!(minsup > 0.0 && minsup <= 1.0))
    throw ConfigError("minsup must lie in (0,1], got " + std::to_string(minsup));
  if (transactions.empty()) throw Error("no transactions to mine");
}

/// Frequent items ranked by descending count (ties: id order) and the
/// transactions rewritten as rank paths.
struct RankedBase {
  std::uint64_t min_count = 1;
  std::vector<ClassId> items;
  std::vector<WeightedPath> paths;

  ClassSet decode(const std::vector<int>& ranks) const {
    ClassSet out;
    for (int r : ranks) out.insert(items[static_cast<std::size_t>(r)]);
    return out;
  }
};

inline RankedBase rank_items(std::span<const ClassSet> transactions, double minsup) {
  RankedBase rb;
  const std::uint64_t total = transactions.size();
  std::map<ClassId, std::uint64_t> counts;
  for (const auto& t : transactions)
    for (const auto& item : t) ++counts[item];

  while (rb.min_count <= total && !meets_threshold(rb.min_count, total, minsup)) ++rb.min_count;

  std::vector<std::pair<ClassId, std::uint64_t>> ranked;
  for (const auto& [item, c] : counts)
    if (c >= rb.min_count) ranked.emplace_back(item, c);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<ClassId, int> rank;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    rank[ranked[i].first] = static_cast<int>(i);
    rb.items.push_back(ranked[i].first);
  }

  for (const auto& t : transactions) {
    std::vector<int> path;
    for (const auto& item : t) {
      auto it = rank.find(item);
      if (it != rank.end()) path.push_back(it->second);
    }
    if (path.empty()) continue;
    std::sort(path.begin(), path.end());
    rb.paths.push_back({std::move(path), 1});
  }
  return rb;
}

inline bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// FP-growth restricted to maximal itemsets. A conditional tree that is a
/// single path yields suffix + path at once, and a branch whose suffix plus
/// every remaining frequent item lies inside a set already found is skipped.
/// `found` holds sorted rank vectors; some may be non-maximal and are
/// filtered by the caller.
inline void fp_max(const std::vector<WeightedPath>& base, std::uint64_t min_count,
                   std::vector<int>& suffix, std::vector<std::vector<int>>& found) {
  std::map<int, std::uint64_t> freq;
  for (const auto& p : base)
    for (int item : p.items) freq[item] += p.count;
  std::vector<int> head = suffix;
  for (const auto& [item, c] : freq)
    if (c >= min_count) head.push_back(item);
  std::sort(head.begin(), head.end());
  for (const auto& f : found)
    if (is_subset(head, f)) return;

  FpTree tree;
  for (const auto& p : base) {
    std::vector<int> kept;
    for (int item : p.items)
      if (freq[item] >= min_count) kept.push_back(item);
    if (!kept.empty()) tree.insert(kept, p.count);
  }

  bool single_path = tree.node(0).children.size() <= 1;
  for (const auto& [item, nodes] : tree.header())
    for (int n : nodes)
      if (tree.node(n).children.size() > 1) single_path = false;
  if (single_path) {
    if (!head.empty()) found.push_back(std::move(head));
    return;
  }

  for (auto it = tree.header().rbegin(); it != tree.header().rend(); ++it) {
    const int item = it->first;
    suffix.push_back(item);
    std::vector<WeightedPath> conditional;
    for (int n : it->second) {
      const auto& leaf = tree.node(n);
      std::vector<int> prefix;
      for (int p = leaf.parent; p > 0; p = tree.node(p).parent) prefix.push_back(tree.node(p).item);
      if (prefix.empty()) continue;
      std::reverse(prefix.begin(), prefix.end());
      conditional.push_back({std::move(prefix), leaf.count});
    }
    fp_max(conditional, min_count, suffix, found);
    suffix.pop_back();
  }
}

}  // namespace detail

/// Every itemset whose support reaches `minsup` (exact comparison), via
/// FP-growth. Throws ConfigError unless 0 < minsup <= 1, and Error when the
/// transaction list is empty.
inline std::vector<FrequentItemset> mine_frequent(std::span<const ClassSet> transactions,
                                                  double minsup) {
  detail::check_mining_input(transactions, minsup);
  const auto rb = detail::rank_items(transactions, minsup);

  std::vector<std::pair<std::vector<int>, std::uint64_t>> raw;
  std::vector<int> suffix;
  detail::fp_growth(rb.paths, rb.min_count, suffix, raw);

  std::vector<FrequentItemset> out;
  out.reserve(raw.size());
  for (const auto& [items, c] : raw) out.push_back({rb.decode(items), {c, transactions.size()}});
  std::sort(out.begin(), out.end(), frequent_order);
  return out;
}

/// Maximal frequent itemsets only, without enumerating their subsets. Same
/// result and order as filtering mine_frequent through maximal().
inline std::vector<FrequentItemset> mine_maximal(std::span<const ClassSet> transactions,
                                                 double minsup) {
  detail::check_mining_input(transactions, minsup);
  const auto rb = detail::rank_items(transactions, minsup);

  std::vector<std::vector<int>> found;
  std::vector<int> suffix;
  detail::fp_max(rb.paths, rb.min_count, suffix, found);

  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<int>> kept;
  for (auto& f : found) {
    bool covered = false;
    for (const auto& k : kept)
      if (detail::is_subset(f, k)) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(std::move(f));
  }

  std::vector<FrequentItemset> out;
  for (const auto& k : kept) {
    ClassSet items = rb.decode(k);
    out.push_back({items, support_ratio(items, transactions)});
  }
  std::sort(out.begin(), out.end(), frequent_order);
  return out;
}

// ---------------------------------------------------------------------------
// Patterns

/// A frequent usage pattern. `attached` holds rarely used classes assigned
/// to it after mining.
struct Pattern {
  ClassSet items;
  Ratio support;
  ClassSet attached;

  ClassSet classes() const {
    ClassSet all = items;
    all.insert(attached.begin(), attached.end());
    return all;
  }
};

struct FupResult {
  double minsup = 0.0;
  std::vector<Pattern> patterns;
  /// Transaction classes in no pattern; emptied by assign_rare_classes.
  ClassSet uncovered;
};

/// Itemsets with no frequent proper superset, in input order. By downward
/// closure it suffices to probe the one-item extensions.
inline std::vector<Pattern> maximal(const std::vector<FrequentItemset>& frequent) {
  std::set<ClassSet> all;
  ClassSet items;
  for (const auto& f : frequent) {
    all.insert(f.items);
    items.insert(f.items.begin(), f.items.end());
  }
  std::vector<Pattern> out;
  for (const auto& f : frequent) {
    bool dominated = false;
    for (const auto& x : items) {
      if (f.items.contains(x)) continue;
      ClassSet grown = f.items;
      grown.insert(x);
      if (all.contains(grown)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back({f.items, f.support, {}});
  }
  return out;
}

/// Maximal patterns at `minsup` plus the transaction classes they miss.
inline FupResult mine_patterns(std::span<const ClassSet> transactions, double minsup) {
  FupResult r;
  r.minsup = minsup;
  for (auto& f : mine_maximal(transactions, minsup)) r.patterns.push_back({std::move(f.items), f.support, {}});
  ClassSet covered;
  for (const auto& p : r.patterns) covered.insert(p.items.begin(), p.items.end());
  for (const auto& t : transactions)
    for (const auto& c : t)
      if (!covered.contains(c)) r.uncovered.insert(c);
  return r;
}

/// Attaches each uncovered class to the pattern whose items, joined with the
/// class, have the highest support. Ties prefer the higher pattern support,
/// then the lexicographically smaller item set.
inline FupResult assign_rare_classes(FupResult result, std::span<const ClassSet> transactions) {
  if (result.uncovered.empty()) return result;
  if (result.patterns.empty())
    throw Error("no frequent pattern to attach " + std::to_string(result.uncovered.size()) +
                " rarely used classes to (minsup " + std::to_string(result.minsup) + ")");
  for (const auto& c : result.uncovered) {
    std::size_t best = 0;
    Ratio best_joint{};
    for (std::size_t i = 0; i < result.patterns.size(); ++i) {
      const auto& p = result.patterns[i];
      ClassSet joined = p.items;
      joined.insert(c);
      const Ratio joint = support_ratio(joined, transactions);
      if (i == 0) {
        best_joint = joint;
        continue;
      }
      const auto& b = result.patterns[best];
      const bool better =
          joint > best_joint ||
          (joint == best_joint &&
           (p.support > b.support || (p.support == b.support && p.items < b.items)));
      if (better) {
        best = i;
        best_joint = joint;
      }
    }
    result.patterns[best].attached.insert(c);
  }
  result.uncovered.clear();
  return result;
}

// ---------------------------------------------------------------------------
// Support sweep

struct SweepRow {
  double minsup = 0.0;
  std::size_t pattern_count = 0;
  double mean_pattern_size = 0.0;
};

/// Maximal-pattern count and mean size at each threshold.
inline std::vector<SweepRow> support_sweep(std::span<const ClassSet> transactions,
                                           std::span<const double> thresholds) {
  std::vector<SweepRow> rows;
  for (double s : thresholds) {
    const auto patterns = mine_maximal(transactions, s);
    SweepRow row{s, patterns.size(), 0.0};
    if (!patterns.empty()) {
      std::size_t total = 0;
      for (const auto& p : patterns) total += p.items.size();
      row.mean_pattern_size = static_cast<double>(total) / static_cast<double>(patterns.size());
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string format_decimal(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "minsup,pattern_count,mean_pattern_size\n";
  for (const auto& r : rows) {
    out += format_decimal(r.minsup) + "," + std::to_string(r.pattern_count) + "," +
           format_decimal(r.mean_pattern_size) + "\n";
  }
  return out;
}

}  // namespace apimine
