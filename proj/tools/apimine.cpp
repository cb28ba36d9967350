#include <array>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apimine/run.hpp"
#include "apimine/synth.hpp"

namespace {

using apimine::RunConfig;
using apimine::Stage;

std::array<double, 3> parse_triple(const std::string& text, const char* flag) {
  std::array<double, 3> out{};
  std::stringstream ss(text);
  std::string part;
  std::size_t n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) break;
    try {
      std::size_t used = 0;
      out[n] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw apimine::ConfigError(std::string(flag) + " expects three numbers a,b,c, got '" + text + "'");
    }
    ++n;
  }
  if (n != 3 || std::getline(ss, part, ','))
    throw apimine::ConfigError(std::string(flag) + " expects three numbers a,b,c, got '" + text + "'");
  return out;
}

struct RawOptions {
  std::string api;
  std::vector<std::string> clients;
  double minsup = 0.45;
  std::string lambda;
  std::string mu;
  std::optional<double> tau;
  std::vector<std::size_t> k{4};
  std::uint64_t seed = 42;
  std::optional<std::size_t> growth_cap;
  std::size_t jobs = 1;
  std::string out = ".";
  bool emit_stage = false;
  std::vector<double> thresholds;
};

void add_run_options(CLI::App* cmd, RawOptions& o, bool with_eval, bool with_sweep) {
  cmd->add_option("--api", o.api, "API model file")->required();
  cmd->add_option("--clients", o.clients, "client model files or directories (repeatable)");
  cmd->add_option("--minsup", o.minsup, "minimum support in (0,1]")->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "interface fitness weights a,b,c");
  cmd->add_option("--mu", o.mu, "component quality weights a,b,c");
  cmd->add_option("--tau", o.tau, "clustering threshold");
  cmd->add_option("--growth-cap", o.growth_cap, "maximum growth steps per component");
  cmd->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  if (with_eval) {
    cmd->add_option("--k", o.k, "fold counts for the reusability harness")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "fold shuffle seed")->capture_default_str();
  }
  if (with_sweep)
    cmd->add_option("--thresholds", o.thresholds, "support thresholds for sweep.csv")
        ->delimiter(',');
}

RunConfig to_config(const RawOptions& o) {
  RunConfig cfg;
  cfg.api_path = o.api;
  for (const auto& c : o.clients) cfg.client_paths.emplace_back(c);
  cfg.pipeline.minsup = o.minsup;
  if (!o.lambda.empty()) cfg.pipeline.weights.lambda = parse_triple(o.lambda, "--lambda");
  if (!o.mu.empty()) cfg.pipeline.weights.mu = parse_triple(o.mu, "--mu");
  if (o.tau) cfg.pipeline.weights.tau = *o.tau;
  cfg.pipeline.growth_cap = o.growth_cap;
  cfg.pipeline.jobs = o.jobs == 0 ? 1 : o.jobs;
  cfg.kfold = o.k;
  cfg.seed = o.seed;
  cfg.sweep_thresholds = o.thresholds;
  cfg.out_dir = o.out;
  cfg.emit_stages = o.emit_stage;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine a layered component architecture from an object-oriented API and its clients"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    Stage stage;
    bool eval;
    bool sweep;
  };
  const Command commands[] = {
      {"pipeline", "run every stage and write architecture, diagram and report", Stage::pipeline, true, true},
      {"transactions", "write client usage transactions", Stage::transactions, false, false},
      {"mine", "write frequent usage patterns", Stage::mine, false, false},
      {"interfaces", "write provided interfaces", Stage::interfaces, false, false},
      {"components", "write first-layer components with growth traces", Stage::components, false, false},
      {"layers", "write the layered architecture and its diagram", Stage::layers, false, false},
      {"evaluate", "write the evaluation report", Stage::evaluate, true, false},
      {"sweep", "write pattern statistics over support thresholds", Stage::sweep, false, true},
  };

  RawOptions raw;
  std::optional<Stage> chosen;
  for (const auto& c : commands) {
    auto* cmd = app.add_subcommand(c.name, c.help);
    add_run_options(cmd, raw, c.eval, c.sweep);
    if (c.stage == Stage::pipeline)
      cmd->add_flag("--emit-stage", raw.emit_stage, "also write every intermediate stage artifact");
    cmd->callback([&chosen, stage = c.stage] { chosen = stage; });
  }

  apimine::SyntheticSpec synth;
  std::string synth_out = ".";
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with planted components");
  synth_cmd->add_option("--seed", synth.seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--api-classes", synth.api_classes, "number of API classes")->capture_default_str();
  synth_cmd->add_option("--planted", synth.planted_components, "planted component groups")
      ->capture_default_str();
  synth_cmd->add_option("--num-clients", synth.clients, "number of client applications")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.usage_noise, "stray reference probability in [0,1]")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      apimine::write_corpus(synth_out, synth, apimine::gen_synthetic(synth));
      return 0;
    }
    RunConfig cfg;
    try {
      cfg = to_config(raw);
    } catch (const apimine::ConfigError& e) {
      throw apimine::StageError("config", e.what());
    }
    if (*chosen == Stage::sweep && cfg.sweep_thresholds.empty())
      cfg.sweep_thresholds = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    apimine::run(*chosen, cfg);
  } catch (const apimine::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.cause() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
