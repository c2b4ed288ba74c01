#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "densecode/experiment.hpp"

namespace {

using namespace densecode;

void print_summary(const ExperimentSummary& s) {
  std::printf("experiment: %s  samples: %ld  seed: %llu  runtime: %.2fs\n",
              to_string(s.experiment).c_str(), s.samples,
              static_cast<unsigned long long>(s.seed), s.runtime_seconds);
  for (const auto& [name, f] : s.fractions) {
    if (f.total == 0) continue;
    std::printf("  %-36s %.4f%% (%ld/%ld, se %.4f%%)\n", name.c_str(),
                100.0 * f.value, f.count, f.total, 100.0 * f.stderr_value);
  }
  for (const auto& [name, v] : s.scalars)
    std::printf("  %-36s %g\n", name.c_str(), v);
  if (s.excluded > 0) std::printf("  excluded samples: %ld\n", s.excluded);
  for (const auto& a : s.assertions)
    std::printf("  [%s] %s: %s\n", a.pass ? "PASS" : "FAIL", a.name.c_str(),
                a.detail.c_str());
  if (!s.csv_path.empty())
    std::printf("  wrote %s and %s\n", s.csv_path.c_str(), s.json_path.c_str());
}

struct CliNoise {
  std::string channel;
  std::string q;
  double p = -1.0;
  std::string lambda;
};

void apply_noise_flags(ExperimentConfig& cfg, const CliNoise& noise) {
  if (noise.channel.empty()) return;
  std::map<std::string, std::string> kv;
  kv["channel"] = noise.channel;
  if (!noise.q.empty()) kv["q"] = noise.q;
  if (noise.p >= 0.0) kv["p"] = std::to_string(noise.p);
  if (!noise.lambda.empty()) kv["lambda"] = noise.lambda;
  cfg.noise = noise_from_config(kv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dense-coding capacity and multipartite-correlation experiments"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "run a configured experiment");
  std::string experiment_name, measure_name, out_dir, config_path;
  long samples = -1;
  std::uint64_t seed = 1;
  int qubits = 3, threads = 1;
  bool full = false;
  CliNoise noise;
  OptimizerConfig opt;

  run_cmd->add_option("--experiment", experiment_name, "experiment name");
  run_cmd->add_option("--samples", samples, "number of sampled states");
  run_cmd->add_option("--seed", seed, "64-bit RNG seed");
  run_cmd->add_option("--measure", measure_name,
                      "ggm | tangle_score | discord_score");
  run_cmd->add_option("--channel", noise.channel,
                      "correlated_pauli | depolarizing | single_pauli");
  run_cmd->add_option("--q", noise.q, "correlated Pauli weights q0,q1,q2,q3");
  run_cmd->add_option("--p", noise.p, "depolarizing strength");
  run_cmd->add_option("--lambda", noise.lambda, "single-qubit Pauli weights x,y,z");
  run_cmd->add_option("--out", out_dir, "output directory for CSV + JSON");
  run_cmd->add_option("--config", config_path, "key=value config file");
  run_cmd->add_option("--qubits", qubits, "total qubit count (default 3)");
  run_cmd->add_option("--threads", threads, "worker threads (default 1)");
  run_cmd->add_option("--restarts", opt.restarts, "unitary-search restarts");
  run_cmd->add_option("--max-iters", opt.max_iters, "simplex iteration cap");
  run_cmd->add_option("--grid", opt.grid_resolution, "discord grid resolution");
  run_cmd->add_flag("--full", full, "publication-scale sample counts");

  // --- verify ------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  std::string theorem;
  long verify_samples = -1;
  std::uint64_t verify_seed = 1;
  std::string verify_out;
  CliNoise verify_noise;
  int verify_threads = 1;
  verify_cmd->add_option("--theorem", theorem, "1 | 2 | 3 | prop1")->required();
  verify_cmd->add_option("--samples", verify_samples, "sample count override");
  verify_cmd->add_option("--seed", verify_seed, "64-bit RNG seed");
  verify_cmd->add_option("--channel", verify_noise.channel, "theorem 3 channel");
  verify_cmd->add_option("--q", verify_noise.q, "theorem 3 Pauli weights");
  verify_cmd->add_option("--out", verify_out, "output directory");
  verify_cmd->add_option("--threads", verify_threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = config_from_file(config_path);
      if (run_cmd->count("--experiment"))
        cfg.experiment = experiment_from_string(experiment_name);
      else if (config_path.empty())
        throw std::invalid_argument("run: --experiment or --config is required");
      if (samples > 0) cfg.samples = samples;
      if (run_cmd->count("--seed")) cfg.seed = seed;
      if (run_cmd->count("--measure")) cfg.measure = measure_from_string(measure_name);
      if (run_cmd->count("--qubits")) cfg.n_qubits = qubits;
      if (run_cmd->count("--threads")) cfg.threads = threads;
      if (run_cmd->count("--restarts")) cfg.opt.restarts = opt.restarts;
      if (run_cmd->count("--max-iters")) cfg.opt.max_iters = opt.max_iters;
      if (run_cmd->count("--grid")) cfg.opt.grid_resolution = opt.grid_resolution;
      if (run_cmd->count("--out")) cfg.output_dir = out_dir;
      if (full) cfg.full_scale = true;
      apply_noise_flags(cfg, noise);

      // Mixed-state experiments only support the discord score; pick it when
      // the user did not ask for anything else.
      if ((cfg.experiment == ExperimentKind::Rank2Scatter ||
           cfg.experiment == ExperimentKind::Rank8Sweep) &&
          !run_cmd->count("--measure"))
        cfg.measure = MeasureSelection::DiscordScore;

      const ExperimentSummary summary = run(cfg);
      print_summary(summary);
      return summary.pass ? 0 : 1;
    }

    // verify
    ExperimentConfig cfg;
    if (theorem == "1") cfg.experiment = ExperimentKind::VerifyTheorem1;
    else if (theorem == "2") cfg.experiment = ExperimentKind::VerifyTheorem2;
    else if (theorem == "3") cfg.experiment = ExperimentKind::VerifyTheorem3;
    else if (theorem == "prop1") cfg.experiment = ExperimentKind::VerifyProp1;
    else throw std::invalid_argument("verify: --theorem must be 1, 2, 3 or prop1");

    cfg.samples = verify_samples > 0 ? verify_samples : 10000;
    cfg.seed = verify_seed;
    cfg.output_dir = verify_out;
    cfg.threads = verify_threads;
    if (cfg.experiment == ExperimentKind::VerifyTheorem3) {
      if (!verify_noise.q.empty() && verify_noise.channel.empty())
        verify_noise.channel = "correlated_pauli";
      apply_noise_flags(cfg, verify_noise);
      if (!cfg.noise)
        cfg.noise = FullyCorrelatedPauli{{0.485, 0.015, 0.015, 0.485}};
    }

    const ExperimentSummary summary = run(cfg);
    print_summary(summary);
    return summary.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
