#pragma once

// Environment model: a rectangular room split into square-grid states, each
// served at the Shannon rate of its worst-case (farthest) point.

#include "lcc/error.hpp"
#include "lcc/types.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <ostream>

namespace lcc {

template <class Scalar = double>
struct RoomConfig {
  Scalar width_m = 5;
  Scalar depth_m = 5;
  Scalar tx_height_m = 3;
  int grid_side = 11;
  Scalar tx_power = 1000;  // linear; 30 dB
  Scalar noise_power = 1;  // linear; 0 dB
  Scalar pathloss_exp = 2;
  Scalar bandwidth_hz = 100e6;
  Scalar file_bits = 4e9;

  int num_states() const { return grid_side * grid_side; }
};

/// Throws ConfigError naming the first field that violates its invariant.
template <class Scalar>
void validate(const RoomConfig<Scalar>& cfg) {
  auto positive = [](const char* field, Scalar v) {
    if (!(v > Scalar(0)) || !std::isfinite(static_cast<double>(v)))
      throw ConfigError(field, "must be a positive finite number");
  };
  positive("width_m", cfg.width_m);
  positive("depth_m", cfg.depth_m);
  positive("tx_height_m", cfg.tx_height_m);
  if (cfg.grid_side < 1) throw ConfigError("grid_side", "must be >= 1");
  positive("tx_power", cfg.tx_power);
  positive("noise_power", cfg.noise_power);
  positive("pathloss_exp", cfg.pathloss_exp);
  positive("bandwidth_hz", cfg.bandwidth_hz);
  positive("file_bits", cfg.file_bits);
}

template <class Scalar = double>
struct StateGrid {
  int grid_side = 0;  // 0 for grids built from an explicit rate vector
  VectorXi cell_x;
  VectorXi cell_y;
  Vector<Scalar> worst_distance;  // meters; NaN when rates were given directly
  Vector<Scalar> rate;            // files per second

  int num_states() const { return static_cast<int>(rate.size()); }
};

/// Spectral efficiency log2(1 + P d^-n / N0) in bits/s/Hz.
template <class Scalar>
Scalar spectral_efficiency(const RoomConfig<Scalar>& cfg, Scalar distance) {
  using std::log2;
  using std::pow;
  return log2(Scalar(1) + cfg.tx_power * pow(distance, -cfg.pathloss_exp) / cfg.noise_power);
}

/// Normalized rate B * log2(1 + P d^-n / N0) / F, in files per second.
template <class Scalar>
Scalar per_state_rate(const RoomConfig<Scalar>& cfg, Scalar distance) {
  if (!(distance > Scalar(0))) throw ConfigError("distance", "must be positive");
  return cfg.bandwidth_hz * spectral_efficiency(cfg, distance) / cfg.file_bits;
}

/// States are numbered row-major: j = cell_y * grid_side + cell_x.
template <class Scalar>
StateGrid<Scalar> build_grid(const RoomConfig<Scalar>& cfg) {
  validate(cfg);
  const int side = cfg.grid_side;
  const int n = side * side;
  const Scalar cw = cfg.width_m / side;
  const Scalar cd = cfg.depth_m / side;
  const Scalar tx = cfg.width_m / 2;
  const Scalar ty = cfg.depth_m / 2;

  StateGrid<Scalar> grid;
  grid.grid_side = side;
  grid.cell_x.resize(n);
  grid.cell_y.resize(n);
  grid.worst_distance.resize(n);
  grid.rate.resize(n);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const int j = y * side + x;
      using std::abs;
      using std::max;
      using std::sqrt;
      // Farthest corner along each axis independently.
      const Scalar dx = max(abs(x * cw - tx), abs((x + 1) * cw - tx));
      const Scalar dy = max(abs(y * cd - ty), abs((y + 1) * cd - ty));
      grid.cell_x(j) = x;
      grid.cell_y(j) = y;
      grid.worst_distance(j) = sqrt(dx * dx + dy * dy + cfg.tx_height_m * cfg.tx_height_m);
      grid.rate(j) = per_state_rate(cfg, grid.worst_distance(j));
    }
  }
  return grid;
}

/// Grid with caller-supplied rates and no geometry.
template <class Scalar>
StateGrid<Scalar> grid_from_rates(const Vector<Scalar>& rates) {
  if (rates.size() == 0) throw ConfigError("rates", "must contain at least one state");
  for (Eigen::Index j = 0; j < rates.size(); ++j) {
    if (!(rates(j) > Scalar(0)) || !std::isfinite(static_cast<double>(rates(j))))
      throw ConfigError("rates", fmt::format("rate of state {} must be positive", j + 1));
  }
  const auto n = rates.size();
  StateGrid<Scalar> grid;
  grid.cell_x = VectorXi::Zero(n);
  grid.cell_y = VectorXi::Zero(n);
  grid.worst_distance = Vector<Scalar>::Constant(n, std::numeric_limits<Scalar>::quiet_NaN());
  grid.rate = rates;
  return grid;
}

/// CSV: state_index, cell_x, cell_y, worst_distance_m, rate_files_per_s.
/// state_index is 1-based.
template <class Scalar>
void write_grid_csv(std::ostream& os, const StateGrid<Scalar>& grid) {
  os << "state_index,cell_x,cell_y,worst_distance_m,rate_files_per_s\n";
  for (int j = 0; j < grid.num_states(); ++j) {
    os << fmt::format("{},{},{},{:.12g},{:.12g}\n", j + 1, grid.cell_x(j), grid.cell_y(j),
                      static_cast<double>(grid.worst_distance(j)),
                      static_cast<double>(grid.rate(j)));
  }
}

}  // namespace lcc
