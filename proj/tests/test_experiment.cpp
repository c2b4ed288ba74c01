#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "densecode/experiment.hpp"
#include "doctest.h"

using namespace densecode;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("densecode_test_" + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  std::map<std::string, std::string> kv{
      {"experiment", "scatter_correlated"}, {"samples", "100"},
      {"seed", "7"},                        {"measure", "ggm"},
      {"channel", "correlated_pauli"},      {"q", "[0.485,0.015,0.015,0.485]"},
  };
  const ExperimentConfig cfg = config_from_kv(kv);
  CHECK(cfg.experiment == ExperimentKind::ScatterCorrelated);
  CHECK(cfg.samples == 100);
  CHECK(cfg.seed == 7);
  CHECK(std::get<FullyCorrelatedPauli>(*cfg.noise).q[0] == doctest::Approx(0.485));

  kv["bogus"] = "1";
  CHECK_THROWS_AS(config_from_kv(kv), std::invalid_argument);
  kv.erase("bogus");

  // missing channel for a noisy experiment
  ExperimentConfig broken = cfg;
  broken.noise.reset();
  CHECK_THROWS_AS(run(broken), std::invalid_argument);

  // wrong channel variant
  broken = cfg;
  broken.noise = UncorrelatedDepolarizing{0.04};
  CHECK_THROWS_AS(run(broken), std::invalid_argument);

  // mixed-state experiments only accept the discord score
  ExperimentConfig rank2;
  rank2.experiment = ExperimentKind::Rank2Scatter;
  rank2.samples = 10;
  rank2.measure = MeasureSelection::Ggm;
  CHECK_THROWS_AS(run(rank2), std::invalid_argument);

  // the theorem-3 assertion is a GGM statement
  ExperimentConfig t3 = cfg;
  t3.experiment = ExperimentKind::VerifyTheorem3;
  t3.measure = MeasureSelection::TangleScore;
  CHECK_THROWS_AS(run(t3), std::invalid_argument);

  CHECK_THROWS_AS(experiment_from_string("nope"), std::invalid_argument);
  CHECK(to_string(experiment_from_string("rank8_sweep")) == "rank8_sweep");
}

TEST_CASE("config file loading") {
  const auto dir = temp_dir("config");
  std::filesystem::create_directories(dir);
  const auto path = dir / "exp.conf";
  std::ofstream out(path);
  out << "# comment line\n"
      << "experiment=verify_theorem1\n"
      << "samples = 50\n"
      << "seed=99\n";
  out.close();
  const ExperimentConfig cfg = config_from_file(path.string());
  CHECK(cfg.experiment == ExperimentKind::VerifyTheorem1);
  CHECK(cfg.samples == 50);
  CHECK(cfg.seed == 99);
  CHECK_THROWS_AS(config_from_file((dir / "missing.conf").string()),
                  std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("same seed reproduces byte-identical CSV output") {
  const auto dir_a = temp_dir("det_a");
  const auto dir_b = temp_dir("det_b");

  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::ScatterNoiseless;
  cfg.samples = 64;
  cfg.seed = 12345;
  cfg.measure = MeasureSelection::Ggm;

  cfg.output_dir = dir_a.string();
  const ExperimentSummary a = run(cfg);
  cfg.output_dir = dir_b.string();
  cfg.threads = 2;  // scheduling must not affect the records
  const ExperimentSummary b = run(cfg);

  const std::string csv_a = read_file(a.csv_path);
  const std::string csv_b = read_file(b.csv_path);
  CHECK(!csv_a.empty());
  CHECK(csv_a == csv_b);

  std::istringstream first_line(csv_a);
  std::string header;
  std::getline(first_line, header);
  CHECK(header ==
        "state_id,lambda_R,capacity,raw_capacity,ggm,tangle_score,discord_score,"
        "cond_i,cond_ii,above_gghz_curve");

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("verify theorem 1 passes on a small run") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::VerifyTheorem1;
  cfg.samples = 500;
  cfg.seed = 2;
  const ExperimentSummary s = run(cfg);
  CHECK(s.pass);
  CHECK(s.violations == 0);
}

TEST_CASE("verify prop1 passes on a small run") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::VerifyProp1;
  cfg.samples = 500;
  cfg.seed = 3;
  const ExperimentSummary s = run(cfg);
  CHECK(s.pass);
}

TEST_CASE("four-qubit noiseless scatter stays below the gGHZ curves") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::ScatterNoiseless;
  cfg.samples = 100;
  cfg.seed = 4;
  cfg.n_qubits = 4;
  cfg.measure = MeasureSelection::TangleScore;
  const ExperimentSummary s = run(cfg);
  CHECK(s.violations == 0);
  for (const auto& [name, f] : s.fractions)
    if (name == "above_gghz_curve") CHECK(f.count == 0);
}

TEST_CASE("rank8 sweep hits maximal capacity at the pure corners") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Rank8Sweep;
  cfg.measure = MeasureSelection::DiscordScore;
  cfg.opt.grid_resolution = 24;  // keep the sweep quick
  const ExperimentSummary s = run(cfg);
  CHECK(s.pass);
  CHECK(s.scalars.at("max_capacity") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gghz measure matching helpers") {
  CHECK(gghz_measure_at_alpha(MeasureSelection::Ggm, 0.8) == doctest::Approx(0.2));
  CHECK(gghz_measure_at_alpha(MeasureSelection::TangleScore, 0.8) ==
        doctest::Approx(4.0 * 0.8 * 0.2));
  CHECK(gghz_measure_at_alpha(MeasureSelection::DiscordScore, 0.8) ==
        doctest::Approx(binary_entropy(0.8)));

  for (double alpha : {0.55, 0.7, 0.9}) {
    for (auto m : {MeasureSelection::Ggm, MeasureSelection::TangleScore,
                   MeasureSelection::DiscordScore}) {
      const double value = gghz_measure_at_alpha(m, alpha);
      CHECK(gghz_alpha_for_measure(m, value) == doctest::Approx(alpha).epsilon(1e-8));
    }
  }
}

TEST_CASE("unwritable output path is reported") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::ScatterNoiseless;
  cfg.samples = 4;
  cfg.output_dir = "/proc/densecode_forbidden";
  CHECK_THROWS(run(cfg));
}
