#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densecode/capacity.hpp"
#include "densecode/channels.hpp"
#include "densecode/correlations.hpp"

namespace densecode {

enum class ExperimentKind {
  ScatterNoiseless,
  ScatterCorrelated,
  ScatterUncorrelated,
  Rank2Scatter,
  Rank8Sweep,
  NoiseThresholdSweep,
  VerifyTheorem1,
  VerifyTheorem2,
  VerifyTheorem3,
  VerifyProp1,
};

enum class MeasureSelection { Ggm, TangleScore, DiscordScore };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);
std::string to_string(MeasureSelection m);
MeasureSelection measure_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::ScatterNoiseless;
  long samples = 10000;
  std::uint64_t seed = 1;
  std::optional<NoiseSpec> noise;
  MeasureSelection measure = MeasureSelection::Ggm;
  std::string output_dir;  // empty: nothing written
  int n_qubits = 3;
  OptimizerConfig opt;
  int threads = 1;
  bool full_scale = false;  // restore the publication-scale sample counts
};

/// Loads key=value lines; unknown keys are rejected.
ExperimentConfig config_from_file(const std::string& path);
ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv);

/// One sampled state. Fields that an experiment does not compute stay NaN
/// (reals) or -1 (flags) and serialize as "nan" / empty.
struct SampleRow {
  long state_id = 0;
  double lambda_R = std::numeric_limits<double>::quiet_NaN();
  double capacity = std::numeric_limits<double>::quiet_NaN();
  double raw_capacity = std::numeric_limits<double>::quiet_NaN();
  double ggm = std::numeric_limits<double>::quiet_NaN();
  double tangle_score = std::numeric_limits<double>::quiet_NaN();
  double discord_score = std::numeric_limits<double>::quiet_NaN();
  int cond_i = -1;
  int cond_ii = -1;
  int above_gghz_curve = -1;
};

struct FractionStat {
  double value = 0.0;
  double stderr_value = 0.0;
  long count = 0;
  long total = 0;
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ThresholdRow {
  double alpha = 0.0;
  double corr_c_threshold = 0.0;    // q1+q2 at the dense-codeability edge
  double corr_noise_entropy = 0.0;  // H({q_i}) at that edge
  double uncorr_p_threshold = 0.0;
  double uncorr_noise_entropy = 0.0;  // 2 H(p) at the edge
};

struct ExperimentSummary {
  ExperimentKind experiment;
  long samples = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::vector<std::pair<std::string, FractionStat>> fractions;
  std::map<std::string, double> scalars;
  std::vector<Assertion> assertions;
  long violations = 0;
  long excluded = 0;
  bool pass = true;
  std::string csv_path;
  std::string json_path;
  std::vector<ThresholdRow> thresholds;  // NoiseThresholdSweep only
};

/// Runs one configured experiment. Deterministic given the seed: sample i
/// always consumes the stream split(seed, i), so results are independent of
/// the thread count, and rewriting the CSV is byte-identical.
ExperimentSummary run(const ExperimentConfig& cfg);

/// Dense-codeability noise thresholds of the gGHZ family, per alpha:
/// fully correlated Pauli noise along the symmetric family
/// q = ((1-c)/2, c/2, c/2, (1-c)/2) and per-sender depolarizing noise,
/// each located by bisection on the raw capacity crossing 2/3.
std::vector<ThresholdRow> noise_threshold_sweep(std::span<const double> alphas,
                                                const OptimizerConfig& opt = {});

/// gGHZ raw capacity under a noise model (three qubits, two senders).
double gghz_noisy_raw_capacity(double alpha, const NoiseSpec& spec,
                               const OptimizerConfig& opt = {});

/// alpha >= 1/2 whose gGHZ carries the given measure value.
double gghz_alpha_for_measure(MeasureSelection measure, double value);

/// Noiseless capacity-matched comparison value: the gGHZ sharing the state's
/// capacity has measure f(alpha = lambda_R).
double gghz_measure_at_alpha(MeasureSelection measure, double alpha);

}  // namespace densecode
