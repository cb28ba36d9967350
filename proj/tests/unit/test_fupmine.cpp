#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "helpers.hpp"

using namespace apimine;
using namespace testing_support;

namespace {

const std::vector<ClassSet> kABC = {set_of({"A", "B", "C"}), set_of({"A", "B"}), set_of({"B", "C"})};

/// Every non-empty subset of the item universe that meets the threshold.
std::vector<FrequentItemset> brute_force(const std::vector<ClassSet>& ts, double minsup) {
  ClassSet universe;
  for (const auto& t : ts) universe.insert(t.begin(), t.end());
  const std::vector<ClassId> items(universe.begin(), universe.end());
  std::vector<FrequentItemset> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << items.size()); ++mask) {
    ClassSet s;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (mask >> i & 1) s.insert(items[i]);
    const Ratio r = support_ratio(s, ts);
    if (meets_threshold(r.count, r.total, minsup)) out.push_back({s, r});
  }
  std::sort(out.begin(), out.end(), frequent_order);
  return out;
}

bool same(const std::vector<FrequentItemset>& a, const std::vector<FrequentItemset>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].items != b[i].items || a[i].support != b[i].support) return false;
  return true;
}

std::set<ClassSet> item_sets(const std::vector<FrequentItemset>& f) {
  std::set<ClassSet> out;
  for (const auto& x : f) out.insert(x.items);
  return out;
}

}  // namespace

TEST_CASE("frequent itemsets of a three-transaction example", "[fupmine][oracle]") {
  const auto f = mine_frequent(kABC, 2.0 / 3.0);
  REQUIRE(f.size() == 5);
  CHECK(f[0].items == set_of({"B"}));
  CHECK(f[0].support == Ratio{3, 3});
  CHECK(f[1].items == set_of({"A"}));
  CHECK(f[2].items == set_of({"C"}));
  CHECK(f[3].items == set_of({"A", "B"}));
  CHECK(f[4].items == set_of({"B", "C"}));
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i].support == Ratio{2, 3});

  const auto m = mine_maximal(kABC, 2.0 / 3.0);
  REQUIRE(m.size() == 2);
  CHECK(m[0].items == set_of({"A", "B"}));
  CHECK(m[1].items == set_of({"B", "C"}));

  const auto top = mine_frequent(kABC, 1.0);
  REQUIRE(top.size() == 1);
  CHECK(top[0].items == set_of({"B"}));
}

TEST_CASE("FP-growth agrees with brute-force enumeration", "[fupmine][property]") {
  CorpusGen gen(77);
  const double thresholds[] = {0.1, 0.2, 0.25, 0.3, 0.45, 0.5, 2.0 / 3.0, 0.9, 1.0};
  for (int round = 0; round < 120; ++round) {
    const auto ts = gen.transactions(gen.uniform(1, 9), gen.uniform(1, 14),
                                     0.2 + 0.1 * static_cast<double>(gen.uniform(0, 5)));
    const double s = thresholds[gen.uniform(0, std::size(thresholds) - 1)];
    const auto mined = mine_frequent(ts, s);
    const auto oracle = brute_force(ts, s);
    CHECK(same(mined, oracle));

    std::vector<FrequentItemset> via_filter;
    for (const auto& p : maximal(mined)) via_filter.push_back({p.items, p.support});
    CHECK(same(mine_maximal(ts, s), via_filter));
  }
}

TEST_CASE("downward closure and threshold monotonicity", "[fupmine][property]") {
  CorpusGen gen(91);
  for (int round = 0; round < 60; ++round) {
    const auto ts = gen.transactions(gen.uniform(2, 8), gen.uniform(2, 12), 0.5);
    const double lo = 0.1 * static_cast<double>(gen.uniform(1, 5));
    const double hi = lo + 0.1 * static_cast<double>(gen.uniform(1, 4));
    const auto f_lo = item_sets(mine_frequent(ts, lo));
    const auto f_hi = item_sets(mine_frequent(ts, hi));
    for (const auto& s : f_hi) CHECK(f_lo.contains(s));
    for (const auto& s : f_lo) {
      for (const auto& x : s) {
        ClassSet sub = s;
        sub.erase(x);
        if (!sub.empty()) CHECK(f_lo.contains(sub));
      }
    }
  }
}

TEST_CASE("mining rejects invalid input", "[fupmine][errors]") {
  CHECK_THROWS_AS(mine_frequent(kABC, 0.0), ConfigError);
  CHECK_THROWS_AS(mine_frequent(kABC, 1.5), ConfigError);
  CHECK_THROWS_AS(mine_maximal(kABC, -0.2), ConfigError);
  CHECK_THROWS_AS(mine_frequent(std::vector<ClassSet>{}, 0.5), Error);
  CHECK(mine_frequent(std::vector<ClassSet>(2), 0.5).empty());
}

TEST_CASE("maximal keeps only itemsets without frequent supersets", "[fupmine]") {
  const auto m = maximal(mine_frequent(kABC, 1.0 / 3.0));
  REQUIRE(m.size() == 1);
  CHECK(m[0].items == set_of({"A", "B", "C"}));
  CHECK(m[0].support == Ratio{1, 3});
}

TEST_CASE("rare classes attach to the pattern they co-occur with most", "[fupmine]") {
  const std::vector<ClassSet> ts = {set_of({"A", "B"}), set_of({"A", "B", "R"}), set_of({"C", "D"}),
                                    set_of({"C", "D", "S"}), set_of({"C", "D"})};
  auto r = mine_patterns(ts, 0.4);
  REQUIRE(r.patterns.size() == 2);
  CHECK(r.patterns[0].items == set_of({"C", "D"}));
  CHECK(r.patterns[1].items == set_of({"A", "B"}));
  CHECK(r.uncovered == set_of({"R", "S"}));

  r = assign_rare_classes(r, ts);
  CHECK(r.uncovered.empty());
  CHECK(r.patterns[0].attached == set_of({"S"}));
  CHECK(r.patterns[1].attached == set_of({"R"}));
  CHECK(r.patterns[1].classes() == set_of({"A", "B", "R"}));
}

TEST_CASE("rare class with no co-occurrence goes to the strongest pattern", "[fupmine]") {
  const std::vector<ClassSet> ts = {set_of({"A"}), set_of({"A"}), set_of({"A"}), set_of({"B"}),
                                    set_of({"B"}), set_of({"Z"})};
  auto r = assign_rare_classes(mine_patterns(ts, 0.3), ts);
  REQUIRE(r.patterns.size() == 2);
  CHECK(r.patterns[0].items == set_of({"A"}));
  CHECK(r.patterns[0].attached == set_of({"Z"}));
  CHECK(r.patterns[1].attached.empty());
}

TEST_CASE("rare classes with no pattern at all is an error", "[fupmine][errors]") {
  const std::vector<ClassSet> ts = {set_of({"A"}), set_of({"B"})};
  const auto r = mine_patterns(ts, 0.9);
  CHECK(r.patterns.empty());
  CHECK_THROWS_AS(assign_rare_classes(r, ts), Error);
}

TEST_CASE("support sweep reports count and mean size per threshold", "[fupmine]") {
  const double thresholds[] = {2.0 / 3.0, 1.0};
  const auto rows = support_sweep(kABC, thresholds);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].pattern_count == 2);
  CHECK(rows[0].mean_pattern_size == 2.0);
  CHECK(rows[1].pattern_count == 1);
  CHECK(rows[1].mean_pattern_size == 1.0);
  CHECK(sweep_csv(rows) ==
        "minsup,pattern_count,mean_pattern_size\n0.6667,2,2.0000\n1.0000,1,1.0000\n");
}
