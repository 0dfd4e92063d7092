#pragma once

// Flat key=value configuration files. '#' starts a comment; blank lines are
// ignored. Keys:
//
//   width_m depth_m tx_height_m grid_side      room geometry
//   tx_power_db | tx_power                     transmit power, dB or linear
//   noise_power pathloss_exp bandwidth_hz file_bits
//   rates=r1,r2,...                            explicit per-state rates (files/s)
//   M K seed trials threads out_dir
//   sweep_variable=K|M  sweep_values=v1,v2,...
//   realization=s1,s2,...                      1-based state of each user
//   deadline_s                                 for maxfile

#include "lcc/env_model.hpp"
#include "lcc/experiments.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcc {

struct CliConfig {
  RoomConfig<double> room;
  std::optional<double> M;
  int K = 10;
  std::optional<std::vector<double>> rates;
  std::uint64_t seed = 42;
  int trials = 1000;
  int threads = 1;
  std::string out_dir;
  std::optional<SweepVariable> sweep_variable;
  std::vector<double> sweep_values;
  std::vector<int> realization;  // 1-based, as written
  std::optional<double> deadline_s;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Applies one key=value assignment; throws ConfigError naming the key.
void apply_setting(CliConfig& cfg, std::string_view key, std::string_view value);

/// Parses a whole config file body on top of `base`.
CliConfig parse_config_text(std::string_view text, CliConfig base = {});

CliConfig load_config_file(const std::string& path, CliConfig base = {});

/// Explicit rates when given, otherwise the grid-derived ones.
VectorXd config_rates(const CliConfig& cfg);

double require_M(const CliConfig& cfg);

SweepConfig to_sweep_config(const CliConfig& cfg);

}  // namespace lcc
