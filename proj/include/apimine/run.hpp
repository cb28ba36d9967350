#pragma once

// File-level driver: loads models, runs the requested stages and writes
// their artifacts into one output directory.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "apimine/error.hpp"
#include "apimine/eval.hpp"
#include "apimine/model_io.hpp"
#include "apimine/pipeline.hpp"
#include "apimine/report.hpp"

namespace apimine {

namespace fs = std::filesystem;

struct RunConfig {
  fs::path api_path;
  /// Model files, or directories whose *.json files are all read.
  std::vector<fs::path> client_paths;
  PipelineOptions pipeline;
  /// Fold counts for the reusability harness; empty skips it.
  std::vector<std::size_t> kfold{4};
  std::uint64_t seed = 42;
  std::vector<double> sweep_thresholds;
  fs::path out_dir = ".";
  bool emit_stages = false;
};

/// Files of a run, in write order.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

/// Client model files named by `paths`; directories contribute their *.json
/// entries in name order.
inline std::vector<fs::path> expand_client_paths(const std::vector<fs::path>& paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(p);
    } else {
      throw ConfigError("client path '" + p.string() + "' does not exist");
    }
  }
  return out;
}

struct LoadedInputs {
  ClassModel api;
  std::vector<ClassModel> clients;
};

inline LoadedInputs load_inputs(const RunConfig& cfg) {
  return detail::run_stage("load", [&] {
    if (cfg.api_path.empty()) throw ConfigError("no API model given");
    LoadedInputs in;
    in.api = load_model(cfg.api_path);
    for (const auto& p : expand_client_paths(cfg.client_paths)) in.clients.push_back(load_model(p));
    std::sort(in.clients.begin(), in.clients.end(),
              [](const ClassModel& a, const ClassModel& b) { return a.name < b.name; });
    check_inputs(in.api, in.clients);
    return in;
  });
}

/// Writes every artifact or none: on failure the files already written are
/// removed again.
inline void write_artifacts(const fs::path& dir, const Artifacts& files) {
  std::vector<fs::path> written;
  try {
    fs::create_directories(dir);
    for (const auto& [name, text] : files) {
      const fs::path p = dir / name;
      std::ofstream out(p, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write '" + p.string() + "'");
      written.push_back(p);
      out << text;
      out.close();
      if (!out) throw Error("failed writing '" + p.string() + "'");
    }
  } catch (const std::exception& e) {
    std::error_code ignored;
    for (const auto& p : written) fs::remove(p, ignored);
    throw StageError("write", e.what());
  }
}

enum class Stage { transactions, mine, interfaces, components, layers, evaluate, sweep, pipeline };

/// Runs the pipeline up to `stage` and returns the artifacts that stage
/// produces. `pipeline` yields the architecture, diagram and report, plus
/// the sweep when thresholds are set and every stage file with emit_stages.
inline Artifacts run_stage_artifacts(Stage stage, const RunConfig& cfg) {
  detail::run_stage("config", [&] {
    cfg.pipeline.validate();
    for (double t : cfg.sweep_thresholds)
      if (!(t > 0.0 && t <= 1.0))
        throw ConfigError("sweep threshold must lie in (0,1], got " + std::to_string(t));
    for (std::size_t k : cfg.kfold)
      if (k < 2) throw ConfigError("K must be at least 2");
    return 0;
  });
  auto inputs = load_inputs(cfg);
  const ApiContext api(std::move(inputs.api));
  const auto& opts = cfg.pipeline;
  Artifacts files;

  auto sweep = [&](std::span<const Transaction> ts) {
    return detail::run_stage("sweep", [&] {
      const auto items = transaction_items(ts);
      if (items.empty()) throw Error("no transactions: no client component uses the API");
      return sweep_csv(support_sweep(items, cfg.sweep_thresholds));
    });
  };

  if (stage == Stage::transactions || stage == Stage::sweep) {
    const auto ts = detail::run_stage("transactions", [&] {
      return extract_transactions(inputs.clients, api.model(), opts.weights, opts.jobs);
    });
    if (stage == Stage::transactions)
      files.emplace_back("transactions.json", render(to_json(ts)));
    else
      files.emplace_back("sweep.csv", sweep(ts));
    return files;
  }

  const auto result = mine_architecture(api, inputs.clients, opts);
  const bool all = stage == Stage::pipeline && cfg.emit_stages;
  if (all) files.emplace_back("transactions.json", render(to_json(result.transactions)));
  if (all || stage == Stage::mine) files.emplace_back("patterns.json", render(to_json(result.fups)));
  if (all || stage == Stage::interfaces)
    files.emplace_back("interfaces.json", render(to_json(result.interfaces)));
  if (all || stage == Stage::components)
    files.emplace_back("components.json", render(to_json(result.first_layer)));
  if (stage == Stage::pipeline || stage == Stage::layers) {
    files.emplace_back("architecture.json", render(architecture_json(result.architecture)));
    files.emplace_back("architecture.dot", architecture_dot(result.architecture, api.graph()));
  }
  if (stage == Stage::pipeline || stage == Stage::evaluate) {
    const auto report = detail::run_stage("evaluate", [&] {
      const auto u = understandability(result.architecture, result.transactions,
                                       api.class_ids().size());
      std::vector<KFoldResult> runs;
      for (std::size_t k : cfg.kfold)
        runs.push_back(reusability_kfold(api, inputs.clients, opts, {k, cfg.seed, false}));
      return make_report(u, runs);
    });
    files.emplace_back("report.json", render(to_json(report)));
  }
  if (stage == Stage::pipeline && !cfg.sweep_thresholds.empty())
    files.emplace_back("sweep.csv", sweep(result.transactions));
  return files;
}

inline void run(Stage stage, const RunConfig& cfg) {
  write_artifacts(cfg.out_dir, run_stage_artifacts(stage, cfg));
}

inline void run_pipeline(const RunConfig& cfg) { run(Stage::pipeline, cfg); }

}  // namespace apimine
