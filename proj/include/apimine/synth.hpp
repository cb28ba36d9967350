#pragma once

// Seeded synthetic corpora with planted component structure.
//
// The API is cut into `plantedComponents` groups. Every group has its own
// vocabulary word, a public half (classes clients reference) and an internal
// half, and is internally chained plus a few random extra calls. Group g's
// last internal class calls into group g+1, which gives the layering stage
// something to stack. Each client has 1-3 components with their own
// vocabulary; a component references every public class of 1-3 groups.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "apimine/error.hpp"
#include "apimine/model.hpp"
#include "apimine/model_io.hpp"

namespace apimine {

struct SyntheticSpec {
  std::uint64_t seed = 42;
  std::size_t api_classes = 20;
  std::size_t planted_components = 4;
  std::size_t clients = 10;
  double usage_noise = 0.0;

  void validate() const {
    if (api_classes == 0) throw ConfigError("apiClasses must be positive");
    if (planted_components == 0 || planted_components > api_classes)
      throw ConfigError("plantedComponents must lie in [1, apiClasses]");
    if (!(usage_noise >= 0.0 && usage_noise <= 1.0))
      throw ConfigError("usageNoise must lie in [0,1]");
  }
};

struct PlantedGroup {
  std::string word;
  std::vector<ClassId> classes;
  std::vector<ClassId> public_classes;
};

struct PlantedClientComponent {
  std::vector<ClassId> classes;
  std::vector<std::size_t> groups;
};

struct PlantedClient {
  std::string name;
  std::vector<PlantedClientComponent> components;
};

struct SyntheticCorpus {
  ClassModel api;
  std::vector<ClassModel> clients;
  std::vector<PlantedGroup> groups;
  std::vector<PlantedClient> planted_clients;

  /// Index of the planted group holding `id`, or groups.size() if none.
  std::size_t group_of(const ClassId& id) const {
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (std::find(groups[g].classes.begin(), groups[g].classes.end(), id) !=
          groups[g].classes.end())
        return g;
    return groups.size();
  }
};

namespace detail {

/// Distinct pronounceable word for every index: onset + vowel + coda
/// syllables, so each word splits into exactly one identifier term.
inline std::string synth_word(std::size_t index, bool client_side) {
  static constexpr const char* onsets[] = {"B", "D", "F", "G", "K", "L", "M", "N",
                                           "P", "R", "S", "T", "V", "Z"};
  static constexpr const char* vowels[] = {"a", "e", "i", "o", "u"};
  static constexpr const char* codas[] = {"lt", "rn", "sk", "mp", "nd", "x", "rv"};
  constexpr std::size_t O = std::size(onsets), V = std::size(vowels), C = std::size(codas);
  std::string w = client_side ? "Qu" : "";
  std::size_t i = index;
  do {
    std::string syl = onsets[i % O];
    i /= O;
    syl += vowels[i % V];
    i /= V;
    syl += codas[i % C];
    i /= C;
    if (!w.empty()) syl[0] = static_cast<char>(syl[0] - 'A' + 'a');
    w += syl;
  } while (i > 0);
  return w;
}

inline constexpr const char* kApiRoles[] = {"Manager", "Factory", "Reader", "Writer",
                                            "Handler", "Cache",   "Adapter", "Registry"};
inline constexpr const char* kClientRoles[] = {"Activity", "Presenter", "Model", "View"};

inline std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

inline bool chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline std::string main_method(const std::string& word) { return lower_first(word); }

}  // namespace detail

/// Deterministic for a given spec.
inline SyntheticCorpus gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SyntheticCorpus corpus;
  corpus.api.name = "synthapi";
  corpus.api.kind = ModelKind::api;

  const std::size_t G = spec.planted_components;
  std::vector<std::size_t> word_order(G * 3);
  for (std::size_t i = 0; i < word_order.size(); ++i) word_order[i] = i;
  std::shuffle(word_order.begin(), word_order.end(), rng);

  // Class declarations of each group, in chain order.
  std::vector<std::vector<ClassDecl>> decls(G);
  for (std::size_t g = 0; g < G; ++g) {
    PlantedGroup group;
    group.word = detail::synth_word(word_order[g], false);
    const std::size_t size = spec.api_classes / G + (g < spec.api_classes % G ? 1 : 0);
    const std::size_t n_public = (size + 1) / 2;
    const std::string pkg = "synthapi." + detail::lower_first(group.word);
    for (std::size_t i = 0; i < size; ++i) {
      ClassDecl c;
      const std::string role = detail::kApiRoles[i % std::size(detail::kApiRoles)];
      // Digits split identifiers without adding a term.
      const std::size_t round = i / std::size(detail::kApiRoles);
      const std::string suffix = round == 0 ? std::string{} : std::to_string(round + 1);
      c.id = pkg + "." + group.word + role + suffix;
      c.package = pkg;
      c.attributes.push_back({detail::lower_first(group.word), "int"});
      MethodDecl m;
      m.name = detail::main_method(group.word);
      c.methods.push_back(m);
      group.classes.push_back(c.id);
      if (i < n_public) group.public_classes.push_back(c.id);
      decls[g].push_back(std::move(c));
    }
    corpus.groups.push_back(std::move(group));
  }

  auto call = [](ClassDecl& from, const ClassDecl& to, const std::string& word) {
    from.methods.front().calls.push_back({to.id, detail::main_method(word)});
  };
  for (std::size_t g = 0; g < G; ++g) {
    auto& cs = decls[g];
    const auto& word = corpus.groups[g].word;
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) call(cs[i], cs[i + 1], word);
    if (cs.size() > 2) {
      for (std::size_t extra = 0; extra < cs.size() / 2; ++extra) {
        const std::size_t a = detail::pick(rng, cs.size());
        const std::size_t b = detail::pick(rng, cs.size());
        if (a != b) call(cs[a], cs[b], word);
      }
    }
    const std::size_t n_public = corpus.groups[g].public_classes.size();
    if (g + 1 < G && cs.size() > n_public) {
      const auto& next = decls[g + 1];
      call(cs.back(), next[detail::pick(rng, next.size())], corpus.groups[g + 1].word);
    }
  }
  for (auto& cs : decls)
    for (auto& c : cs) corpus.api.classes.push_back(std::move(c));
  std::sort(corpus.api.classes.begin(), corpus.api.classes.end(),
            [](const ClassDecl& a, const ClassDecl& b) { return a.id < b.id; });

  std::vector<ClassId> all_api;
  for (const auto& c : corpus.api.classes) all_api.push_back(c.id);
  auto word_of = [&](const ClassId& id) { return corpus.groups[corpus.group_of(id)].word; };

  const std::size_t digits = std::to_string(spec.clients > 0 ? spec.clients - 1 : 0).size();
  for (std::size_t k = 0; k < spec.clients; ++k) {
    std::string name = std::to_string(k);
    name = "client" + std::string(std::max<std::size_t>(digits, 2) - name.size(), '0') + name;
    ClassModel client;
    client.name = name;
    client.kind = ModelKind::client;
    PlantedClient planted{name, {}};

    const std::size_t n_comp = 1 + detail::pick(rng, 3);
    std::vector<std::size_t> words(word_order.size());
    for (std::size_t i = 0; i < words.size(); ++i) words[i] = i;
    std::shuffle(words.begin(), words.end(), rng);
    for (std::size_t ci = 0; ci < n_comp; ++ci) {
      const std::string word = detail::synth_word(words[ci], true);
      const std::string pkg = name + "." + detail::lower_first(word);
      const std::size_t n_cls = 2 + detail::pick(rng, 3);
      std::vector<ClassDecl> cs;
      PlantedClientComponent pc;
      for (std::size_t i = 0; i < n_cls; ++i) {
        ClassDecl c;
        c.id = pkg + "." + word + detail::kClientRoles[i];
        c.package = pkg;
        c.attributes.push_back({detail::lower_first(word), "int"});
        MethodDecl m;
        m.name = detail::main_method(word);
        c.methods.push_back(m);
        pc.classes.push_back(c.id);
        cs.push_back(std::move(c));
      }
      for (std::size_t i = 0; i + 1 < cs.size(); ++i)
        cs[i].methods.front().calls.push_back({cs[i + 1].id, detail::main_method(word)});

      std::vector<std::size_t> gs(G);
      for (std::size_t g = 0; g < G; ++g) gs[g] = g;
      std::shuffle(gs.begin(), gs.end(), rng);
      // One group 60% of the time, two 25%, three 15%.
      const std::size_t roll = detail::pick(rng, 20);
      gs.resize(std::min<std::size_t>(G, roll < 12 ? 1 : roll < 17 ? 2 : 3));
      std::sort(gs.begin(), gs.end());
      std::size_t slot = 0;
      for (std::size_t g : gs) {
        for (const auto& target : corpus.groups[g].public_classes) {
          auto& from = cs[slot++ % cs.size()];
          from.methods.front().calls.push_back({target, detail::main_method(corpus.groups[g].word)});
          if (detail::chance(rng, spec.usage_noise)) {
            const auto& stray = all_api[detail::pick(rng, all_api.size())];
            from.methods.front().calls.push_back({stray, detail::main_method(word_of(stray))});
          }
        }
      }
      pc.groups = gs;
      planted.components.push_back(std::move(pc));
      for (auto& c : cs) client.classes.push_back(std::move(c));
    }
    corpus.clients.push_back(std::move(client));
    corpus.planted_clients.push_back(std::move(planted));
  }
  return corpus;
}

/// Ground truth of a generated corpus.
inline std::string truth_json(const SyntheticSpec& spec, const SyntheticCorpus& corpus) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["seed"] = spec.seed;
  doc["apiClasses"] = spec.api_classes;
  doc["plantedComponents"] = spec.planted_components;
  doc["clients"] = spec.clients;
  doc["usageNoise"] = spec.usage_noise;
  doc["groups"] = ojson::array();
  for (const auto& g : corpus.groups)
    doc["groups"].push_back({{"word", g.word}, {"classes", g.classes}, {"public", g.public_classes}});
  doc["clientComponents"] = ojson::array();
  for (const auto& c : corpus.planted_clients) {
    ojson comps = ojson::array();
    for (const auto& pc : c.components)
      comps.push_back({{"classes", pc.classes}, {"groups", pc.groups}});
    doc["clientComponents"].push_back({{"client", c.name}, {"components", comps}});
  }
  return doc.dump(2) + "\n";
}

/// Writes api.json, clients/<name>.json and truth.json under `dir`.
inline void write_corpus(const std::filesystem::path& dir, const SyntheticSpec& spec,
                         const SyntheticCorpus& corpus) {
  namespace fs = std::filesystem;
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << text;
  };
  fs::create_directories(dir / "clients");
  write(dir / "api.json", emit_model(corpus.api));
  for (const auto& c : corpus.clients) write(dir / "clients" / (c.name + ".json"), emit_model(c));
  write(dir / "truth.json", truth_json(spec, corpus));
}

}  // namespace apimine
