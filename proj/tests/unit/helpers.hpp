#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "apimine/apimine.hpp"

namespace testing_support {

using namespace apimine;

inline ClassModel fixture(const std::string& name) {
  return load_model(std::string(APIMINE_FIXTURES) + "/" + name);
}

inline ClassDecl& ensure_class(ClassModel& m, const ClassId& id) {
  for (auto& c : m.classes)
    if (c.id == id) return c;
  ClassDecl c;
  c.id = id;
  m.classes.push_back(std::move(c));
  return m.classes.back();
}

/// Adds a call from `from` to `to` through a method named "x". One-letter
/// identifiers contribute no terms, so the call leaves the vocabulary alone.
inline void add_call(ClassModel& m, const ClassId& from, const ClassId& to, int times = 1) {
  auto& c = ensure_class(m, from);
  if (c.methods.empty() || c.methods.front().name != "x") {
    MethodDecl x;
    x.name = "x";
    c.methods.insert(c.methods.begin(), std::move(x));
  }
  for (int i = 0; i < times; ++i) c.methods.front().calls.push_back({to, "x"});
}

inline ClassModel make_model(const std::string& name, ModelKind kind,
                             const std::vector<ClassId>& ids) {
  ClassModel m;
  m.name = name;
  m.kind = kind;
  for (const auto& id : ids) ensure_class(m, id);
  return m;
}

inline ClassSet set_of(std::initializer_list<const char*> ids) {
  ClassSet s;
  for (const char* id : ids) s.insert(id);
  return s;
}

/// Random transaction lists over items "i00".."iNN".
struct CorpusGen {
  std::mt19937_64 rng;
  explicit CorpusGen(std::uint64_t seed) : rng(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }

  std::vector<ClassSet> transactions(std::size_t items, std::size_t count, double density) {
    std::bernoulli_distribution pick(density);
    std::vector<ClassSet> ts(count);
    for (auto& t : ts)
      for (std::size_t i = 0; i < items; ++i)
        if (pick(rng)) t.insert((i < 10 ? "i0" : "i") + std::to_string(i));
    return ts;
  }
};

}  // namespace testing_support
