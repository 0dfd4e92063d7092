#pragma once

// Monte Carlo comparison of the proposed scheme against unicast and the
// uniform-placement baseline, with users dropped uniformly over the states.

#include "lcc/env_model.hpp"
#include "lcc/types.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lcc {

/// SplitMix64 evaluated at consecutive counters of a key derived from
/// (seed, stream, substream). Every (sweep point, trial) pair gets its own
/// key, so the draws do not depend on which thread runs which trial.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream);

  std::uint64_t next();

  /// Uniform in [0, n) by 128-bit multiply-shift (no rejection loop).
  std::uint64_t uniform_below(std::uint64_t n);

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class SweepVariable { K, M };

struct SweepConfig {
  RoomConfig<double> room;
  std::optional<VectorXd> rates;  // replaces the grid-derived rates when set
  SweepVariable variable = SweepVariable::K;
  std::vector<double> values;
  int fixed_K = 10;
  double fixed_M = 0;
  int trials = 1000;
  std::uint64_t base_seed = 42;
  int threads = 1;  // does not affect results
};

/// Throws ConfigError for an unusable sweep.
void validate(const SweepConfig& cfg);

struct Stats {
  double mean = 0;
  double sd = 0;
};

struct TrialResult {
  double t_hat = 0;
  double t_m = 0;
  double t_u = 0;
  double t_x = 0;
  double t_x_floor = 0;
  double t_x_ceil = 0;
};

struct SweepRow {
  double value = 0;
  int K = 0;
  double M = 0;
  bool feasible = true;
  std::string flag;  // why the row is infeasible
  bool full_support = false;
  double min_t = 0;  // min_j K m(j)
  Stats t_m, t_u, t_x, t_x_floor, t_x_ceil;
  double ratio_u_m = 0;  // mean over trials of T_u / T_m
  double ratio_u_x = 0;  // mean over trials of T_u / T_x
  std::vector<TrialResult> trials;
};

struct ExperimentReport {
  SweepConfig config;
  std::uint64_t config_hash = 0;
  std::vector<SweepRow> rows;
};

ExperimentReport run_sweep(const SweepConfig& cfg);

/// Canonical key=value text of a sweep; parseable as a CLI config file.
std::string canonical_config_text(const SweepConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);

/// sweep_value, mean_Tm, sd_Tm, mean_Tu, sd_Tu, mean_Tx, sd_Tx, ratio_u_m, ratio_u_x
void write_sweep_csv(std::ostream& os, const ExperimentReport& report);

/// Baseline rounding sensitivity: floor, ceiling and memory-shared T_x means.
void write_baseline_sensitivity_csv(std::ostream& os, const ExperimentReport& report);

/// Config text followed by '#' comment lines with seed, hash and flagged rows.
void write_sweep_metadata(std::ostream& os, const ExperimentReport& report);

struct CrossoverRow {
  std::string room;
  int num_states = 0;
  double M = 0;
  bool feasible = true;
  bool full_support = false;
  double mean_t_m = 0;
  double mean_t_x = 0;
  double ratio_u_m = 0;
  double ratio_u_x = 0;
  std::string winner;  // "proposed", "baseline" or "n/a"
};

struct CrossoverTable {
  std::vector<CrossoverRow> rows;
};

/// Runs both M-sweeps and marks the scheme with the lower mean delivery time.
CrossoverTable crossover_report(const SweepConfig& first, const SweepConfig& second);

void write_crossover_csv(std::ostream& os, const CrossoverTable& table);

}  // namespace lcc
