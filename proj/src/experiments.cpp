#include "lcc/experiments.hpp"

#include "lcc/allocation.hpp"
#include "lcc/error.hpp"
#include "lcc/evaluation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <thread>

namespace lcc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::string join_doubles(const double* v, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ',';
    out += fmt::format("{:.17g}", v[i]);
  }
  return out;
}

Stats summarize(const std::vector<TrialResult>& trials, double TrialResult::*field) {
  Stats s;
  const double n = static_cast<double>(trials.size());
  for (const auto& t : trials) s.mean += t.*field;
  s.mean /= n;
  if (trials.size() > 1) {
    double ss = 0;
    for (const auto& t : trials) ss += (t.*field - s.mean) * (t.*field - s.mean);
    s.sd = std::sqrt(ss / (n - 1));
  }
  return s;
}

std::string fmt12(double v) { return std::isnan(v) ? "nan" : fmt::format("{:.12g}", v); }

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
    : key_(mix(mix(mix(seed) ^ (stream * kGolden)) ^ (substream + kGolden))) {}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next() { return mix(key_ + kGolden * counter_++); }

std::uint64_t CounterRng::uniform_below(std::uint64_t n) {
  const unsigned __int128 product = static_cast<unsigned __int128>(next()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

void validate(const SweepConfig& cfg) {
  if (!cfg.rates) validate(cfg.room);
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads", "must be >= 1");
  if (cfg.values.empty()) throw ConfigError("sweep_values", "must not be empty");
  for (std::size_t i = 1; i < cfg.values.size(); ++i) {
    if (!(cfg.values[i] > cfg.values[i - 1]))
      throw ConfigError("sweep_values", "must be strictly increasing");
  }
  if (cfg.variable == SweepVariable::K) {
    for (double v : cfg.values) {
      if (v != std::floor(v) || v < 1 || v > UserSet::kMaxUsers)
        throw ConfigError("sweep_values",
                          fmt::format("K values must be integers in [1, {}]", UserSet::kMaxUsers));
    }
  } else if (cfg.fixed_K < 1 || cfg.fixed_K > UserSet::kMaxUsers) {
    throw ConfigError("K", fmt::format("must be in [1, {}]", UserSet::kMaxUsers));
  }
}

ExperimentReport run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const VectorXd rates = cfg.rates ? grid_from_rates(*cfg.rates).rate : build_grid(cfg.room).rate;
  const int S = static_cast<int>(rates.size());

  ExperimentReport report;
  report.config = cfg;
  report.config_hash = fnv1a64(canonical_config_text(cfg));

  for (std::size_t v = 0; v < cfg.values.size(); ++v) {
    SweepRow row;
    row.value = cfg.values[v];
    row.K = cfg.variable == SweepVariable::K ? static_cast<int>(row.value) : cfg.fixed_K;
    row.M = cfg.variable == SweepVariable::M ? row.value : cfg.fixed_M;

    MemoryAllocation<double> alloc;
    try {
      alloc = allocate_memory(rates, row.M, row.K);
    } catch (const AllocationError& e) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      row.feasible = false;
      row.flag = e.what();
      row.t_m = row.t_u = row.t_x = row.t_x_floor = row.t_x_ceil = {nan, nan};
      row.ratio_u_m = row.ratio_u_x = row.min_t = nan;
      report.rows.push_back(std::move(row));
      continue;
    }
    row.full_support = alloc.full_support();
    row.min_t = alloc.t.minCoeff();

    row.trials.resize(cfg.trials);
    auto run_trial = [&](int tau) {
      CounterRng rng(cfg.base_seed, v, static_cast<std::uint64_t>(tau));
      UserRealization users;
      users.states.resize(row.K);
      for (int& s : users.states) s = static_cast<int>(rng.uniform_below(S));
      const auto base = baseline_tx_detail(rates, row.M, users);
      TrialResult& r = row.trials[tau];
      r.t_hat = common_cache_ratio(alloc, users);
      r.t_m = analytic_tm(alloc, rates, users);
      r.t_u = analytic_tu(alloc, rates, users);
      r.t_x = base.interpolated;
      r.t_x_floor = base.floor_scheme;
      r.t_x_ceil = base.ceil_scheme;
    };
    if (cfg.threads == 1) {
      for (int tau = 0; tau < cfg.trials; ++tau) run_trial(tau);
    } else {
      std::vector<std::jthread> workers;
      for (int w = 0; w < cfg.threads; ++w) {
        workers.emplace_back([&, w] {
          for (int tau = w; tau < cfg.trials; tau += cfg.threads) run_trial(tau);
        });
      }
    }

    // Reduced in trial order, so the result is independent of scheduling.
    row.t_m = summarize(row.trials, &TrialResult::t_m);
    row.t_u = summarize(row.trials, &TrialResult::t_u);
    row.t_x = summarize(row.trials, &TrialResult::t_x);
    row.t_x_floor = summarize(row.trials, &TrialResult::t_x_floor);
    row.t_x_ceil = summarize(row.trials, &TrialResult::t_x_ceil);
    for (const auto& t : row.trials) {
      row.ratio_u_m += t.t_u / t.t_m;
      row.ratio_u_x += t.t_x > 0 ? t.t_u / t.t_x : std::numeric_limits<double>::infinity();
    }
    row.ratio_u_m /= cfg.trials;
    row.ratio_u_x /= cfg.trials;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string canonical_config_text(const SweepConfig& cfg) {
  const auto& r = cfg.room;
  std::string out;
  out += fmt::format("width_m={:.17g}\n", r.width_m);
  out += fmt::format("depth_m={:.17g}\n", r.depth_m);
  out += fmt::format("tx_height_m={:.17g}\n", r.tx_height_m);
  out += fmt::format("grid_side={}\n", r.grid_side);
  out += fmt::format("tx_power={:.17g}\n", r.tx_power);
  out += fmt::format("noise_power={:.17g}\n", r.noise_power);
  out += fmt::format("pathloss_exp={:.17g}\n", r.pathloss_exp);
  out += fmt::format("bandwidth_hz={:.17g}\n", r.bandwidth_hz);
  out += fmt::format("file_bits={:.17g}\n", r.file_bits);
  if (cfg.rates) out += fmt::format("rates={}\n", join_doubles(cfg.rates->data(), cfg.rates->size()));
  out += fmt::format("sweep_variable={}\n", cfg.variable == SweepVariable::K ? "K" : "M");
  out += fmt::format("sweep_values={}\n", join_doubles(cfg.values.data(), cfg.values.size()));
  out += fmt::format("K={}\n", cfg.fixed_K);
  out += fmt::format("M={:.17g}\n", cfg.fixed_M);
  out += fmt::format("trials={}\n", cfg.trials);
  out += fmt::format("seed={}\n", cfg.base_seed);
  return out;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_sweep_csv(std::ostream& os, const ExperimentReport& report) {
  os << "sweep_value,mean_Tm,sd_Tm,mean_Tu,sd_Tu,mean_Tx,sd_Tx,ratio_u_m,ratio_u_x\n";
  for (const auto& r : report.rows) {
    os << fmt::format("{},{},{},{},{},{},{},{},{}\n", fmt12(r.value), fmt12(r.t_m.mean),
                      fmt12(r.t_m.sd), fmt12(r.t_u.mean), fmt12(r.t_u.sd), fmt12(r.t_x.mean),
                      fmt12(r.t_x.sd), fmt12(r.ratio_u_m), fmt12(r.ratio_u_x));
  }
}

void write_baseline_sensitivity_csv(std::ostream& os, const ExperimentReport& report) {
  os << "sweep_value,full_support,min_t,mean_Tx_floor,mean_Tx_ceil,mean_Tx\n";
  for (const auto& r : report.rows) {
    os << fmt::format("{},{},{},{},{},{}\n", fmt12(r.value), r.full_support ? 1 : 0,
                      fmt12(r.min_t), fmt12(r.t_x_floor.mean), fmt12(r.t_x_ceil.mean),
                      fmt12(r.t_x.mean));
  }
}

void write_sweep_metadata(std::ostream& os, const ExperimentReport& report) {
  os << canonical_config_text(report.config);
  os << fmt::format("# seed={}\n# trials={}\n# config_hash={:016x}\n", report.config.base_seed,
                    report.config.trials, report.config_hash);
  for (const auto& r : report.rows) {
    if (!r.feasible) os << fmt::format("# flagged sweep_value={} {}\n", fmt12(r.value), r.flag);
  }
}

CrossoverTable crossover_report(const SweepConfig& first, const SweepConfig& second) {
  if (first.variable != SweepVariable::M || second.variable != SweepVariable::M)
    throw ConfigError("sweep_variable", "crossover needs two M-sweeps");
  if (first.fixed_K != second.fixed_K) throw ConfigError("K", "crossover configs must share K");
  if (first.trials != second.trials)
    throw ConfigError("trials", "crossover configs must share the trial count");

  CrossoverTable table;
  for (const SweepConfig* cfg : {&first, &second}) {
    const auto report = run_sweep(*cfg);
    const int S = cfg->rates ? static_cast<int>(cfg->rates->size()) : cfg->room.num_states();
    const std::string room = cfg->rates ? fmt::format("explicit-{}", S)
                                        : fmt::format("{:g}x{:g}", cfg->room.width_m,
                                                      cfg->room.depth_m);
    for (const auto& r : report.rows) {
      CrossoverRow c;
      c.room = room;
      c.num_states = S;
      c.M = r.M;
      c.feasible = r.feasible;
      c.full_support = r.full_support;
      c.mean_t_m = r.t_m.mean;
      c.mean_t_x = r.t_x.mean;
      c.ratio_u_m = r.ratio_u_m;
      c.ratio_u_x = r.ratio_u_x;
      c.winner = !r.feasible ? "n/a" : (c.mean_t_m < c.mean_t_x ? "proposed" : "baseline");
      table.rows.push_back(std::move(c));
    }
  }
  return table;
}

void write_crossover_csv(std::ostream& os, const CrossoverTable& table) {
  os << "room,S,M,full_support,mean_Tm,mean_Tx,ratio_u_m,ratio_u_x,winner\n";
  for (const auto& r : table.rows) {
    os << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.room, r.num_states, fmt12(r.M),
                      r.full_support ? 1 : 0, fmt12(r.mean_t_m), fmt12(r.mean_t_x),
                      fmt12(r.ratio_u_m), fmt12(r.ratio_u_x), r.winner);
  }
}

}  // namespace lcc
