#include "lcc/config.hpp"
#include "lcc/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lcc;

namespace {

SweepConfig small_k_sweep() {
  SweepConfig c;
  c.variable = SweepVariable::K;
  c.values = {2, 4, 6};
  c.fixed_M = 60;
  c.trials = 200;
  return c;
}

std::string csv_of(const ExperimentReport& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("counter RNG: range and stream separation") {
  CounterRng a(1, 0, 0), b(1, 0, 1), c(1, 1, 0), a2(1, 0, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    CHECK(x == a2.next());
    same_ab += x == b.next();
    same_ac += x == c.next();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);

  CounterRng r(7, 3, 9);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = r.uniform_below(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("sweeps are reproducible and independent of thread count") {
  auto cfg = small_k_sweep();
  const auto one = run_sweep(cfg);
  const auto again = run_sweep(cfg);
  cfg.threads = 4;
  const auto four = run_sweep(cfg);
  CHECK(csv_of(one) == csv_of(again));
  CHECK(csv_of(one) == csv_of(four));
  for (std::size_t v = 0; v < one.rows.size(); ++v)
    for (std::size_t t = 0; t < one.rows[v].trials.size(); ++t)
      CHECK(one.rows[v].trials[t].t_m == four.rows[v].trials[t].t_m);

  cfg.base_seed = 43;
  CHECK(csv_of(run_sweep(cfg)) != csv_of(one));
}

TEST_CASE("full support: T_u / T_m equals t_hat + 1 in every trial") {
  const auto report = run_sweep(small_k_sweep());
  for (const auto& row : report.rows) {
    REQUIRE(row.full_support);
    double mean_ratio = 0;
    for (const auto& t : row.trials) {
      CHECK(t.t_u / t.t_m == doctest::Approx(t.t_hat + 1).epsilon(1e-12));
      mean_ratio += t.t_u / t.t_m;
    }
    CHECK(row.ratio_u_m == doctest::Approx(mean_ratio / row.trials.size()).epsilon(1e-14));
  }
}

TEST_CASE("infeasible sweep points are flagged, not fatal") {
  SweepConfig c;
  c.variable = SweepVariable::M;
  c.values = {30, 121, 130};
  c.trials = 10;
  const auto report = run_sweep(c);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].feasible);
  CHECK_FALSE(report.rows[1].feasible);
  CHECK_FALSE(report.rows[2].feasible);
  CHECK(std::isnan(report.rows[1].t_m.mean));
  std::ostringstream meta;
  write_sweep_metadata(meta, report);
  CHECK(meta.str().find("# flagged sweep_value=121") != std::string::npos);
  CHECK(csv_of(report).find("121,nan,nan") != std::string::npos);
}

TEST_CASE("metadata sidecar reproduces the CSV byte for byte") {
  auto cfg = small_k_sweep();
  cfg.room.tx_power = 500;
  cfg.base_seed = 2024;
  const auto report = run_sweep(cfg);
  std::ostringstream meta;
  write_sweep_metadata(meta, report);
  const auto parsed = to_sweep_config(parse_config_text(meta.str()));
  const auto replay = run_sweep(parsed);
  CHECK(csv_of(replay) == csv_of(report));
  CHECK(replay.config_hash == report.config_hash);

  SweepConfig rates_cfg;
  rates_cfg.rates = VectorXd::LinSpaced(6, 1.0, 2.0);
  rates_cfg.variable = SweepVariable::M;
  rates_cfg.values = {0.5, 2.5, 4.5};
  rates_cfg.fixed_K = 3;
  rates_cfg.trials = 50;
  const auto r2 = run_sweep(rates_cfg);
  std::ostringstream meta2;
  write_sweep_metadata(meta2, r2);
  CHECK(csv_of(run_sweep(to_sweep_config(parse_config_text(meta2.str())))) == csv_of(r2));
}

TEST_CASE("sweep validation") {
  auto c = small_k_sweep();
  c.values = {4, 2};
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
  c.values = {2.5};
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
  c.values = {40};
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
  c = small_k_sweep();
  c.trials = 0;
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
}

TEST_CASE("crossover table") {
  SweepConfig a;
  a.variable = SweepVariable::M;
  a.values = {20, 100};
  a.trials = 50;
  auto b = a;
  b.room.width_m = b.room.depth_m = 10;
  b.room.grid_side = 21;
  b.values = {100, 400};
  const auto table = crossover_report(a, b);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[0].room == "5x5");
  CHECK(table.rows[2].room == "10x10");
  CHECK(table.rows[2].num_states == 441);
  for (const auto& r : table.rows)
    CHECK(r.winner == (r.mean_t_m < r.mean_t_x ? "proposed" : "baseline"));
  std::ostringstream os;
  write_crossover_csv(os, table);
  CHECK(os.str().rfind("room,S,M,full_support,mean_Tm,mean_Tx,ratio_u_m,ratio_u_x,winner\n5x5,121,20,", 0) == 0);

  b.fixed_K = 5;
  CHECK_THROWS_AS(crossover_report(a, b), ConfigError);
}
