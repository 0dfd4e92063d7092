#include "lcc/evaluation.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace lcc;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// Direct enumeration of every (t+1)-subset of users.
double enumerate_uniform_time(const std::vector<double>& r, int t) {
  const int K = static_cast<int>(r.size());
  if (t >= K) return 0;
  if (t <= 0) {
    double s = 0;
    for (double x : r) s += 1 / x;
    return s;
  }
  double total = 0;
  for (const UserSet& g : subsets_of(K, t + 1)) {
    double slowest = 1e300;
    for (int i : g.members()) slowest = std::min(slowest, r[i]);
    total += 1.0 / slowest;
  }
  return total / static_cast<double>(binomial(K, t));
}

const VectorXd kRates = vec({3, 2, 1, 2, 3});
const UserRealization kUsers{{0, 1, 3, 4}};

}  // namespace

TEST_CASE("five-state example times") {
  const auto alloc = allocate_memory(kRates, 2.25, 4);
  CHECK(common_cache_ratio(alloc, kUsers) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(analytic_tm(alloc, kRates, kUsers) - 0.5) <= 1e-12);
  CHECK(std::abs(analytic_tu(alloc, kRates, kUsers) - 1.0) <= 1e-12);

  // t = 1.8: 0.2 * T(1) + 0.8 * T(2), each by enumeration.
  const std::vector<double> ur{3, 2, 2, 3};
  const double expected_tx = 0.2 * enumerate_uniform_time(ur, 1) + 0.8 * enumerate_uniform_time(ur, 2);
  CHECK(std::abs(baseline_tx(kRates, 2.25, kUsers) - expected_tx) <= 1e-12);

  const auto ev = evaluate(kRates, alloc, 2.25, kUsers);
  CHECK(std::abs(ev.gain_unicast - 2.0) <= 1e-12);
  CHECK(std::abs(ev.bound_rhs - 21.0 / 11.0) <= 1e-12);
  // 3 / ((1/4 + 1/4) * 11) * (5/4 + 9/4)
  CHECK(std::abs(optimality_bound(kRates, alloc, 2.25, 4).rhs - 1.909090909090909) <= 1e-12);
}

TEST_CASE("uniform scheme time: sorted counting matches enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rate(0.1, 10);
  for (int n = 0; n < 300; ++n) {
    const int K = std::uniform_int_distribution<int>(1, 9)(rng);
    std::vector<double> r(K);
    for (double& x : r) x = rate(rng);
    for (int t = 0; t <= K; ++t)
      CHECK(uniform_scheme_time(r, t) == doctest::Approx(enumerate_uniform_time(r, t)).epsilon(1e-12));
  }
}

TEST_CASE("uniform scheme with equal rates is the classic coded-caching time") {
  for (int K = 1; K <= 10; ++K) {
    for (int t = 0; t <= K; ++t) {
      const std::vector<double> r(K, 2.5);
      CHECK(uniform_scheme_time(r, t) ==
            doctest::Approx((K - t) / (t + 1.0) / 2.5).epsilon(1e-13));
    }
  }
  CHECK(uniform_scheme_time(std::vector<double>{1, 10}, 1) == doctest::Approx(0.5));
}

TEST_CASE("baseline memory sharing") {
  const VectorXd r = vec({1, 4});
  const UserRealization u{{0, 1}};
  // K M / S = 0.5: halfway between unicast (1.25) and t = 1 (1/min = 1, / C(2,1) = 0.5).
  const auto d = baseline_tx_detail(r, 1.0, u);
  CHECK(d.t == doctest::Approx(1.0));
  CHECK(d.floor_scheme == doctest::Approx(0.5));
  CHECK(d.interpolated == doctest::Approx(0.5));

  const UserRealization one{{0}};
  const auto e = baseline_tx_detail(r, 1.0, one);  // t = 0.5, K = 1
  CHECK(e.floor_scheme == doctest::Approx(1.0));
  CHECK(e.ceil_scheme == doctest::Approx(0.0));
  CHECK(e.interpolated == doctest::Approx(0.5));

  // Rounding noise around an integer t does not trigger interpolation.
  const auto f = baseline_tx_detail(vec({2, 2, 2}), 1.5 * (1 + 1e-14), UserRealization{{0, 1}});
  CHECK(f.floor_scheme == f.ceil_scheme);
}

TEST_CASE("homogeneous rates: proposed equals baseline at integer t") {
  for (int K = 2; K <= 8; ++K) {
    for (int t = 1; t < K; ++t) {
      const int S = 2 * K;
      const VectorXd r = VectorXd::Constant(S, 3.0);
      const double M = static_cast<double>(t) * S / K;
      const auto alloc = allocate_memory(r, M, K);
      UserRealization u;
      for (int i = 0; i < K; ++i) u.states.push_back(i % S);
      const double tm = analytic_tm(alloc, r, u);
      CHECK(tm == doctest::Approx(baseline_tx(r, M, u)).epsilon(1e-12));
      CHECK(tm == doctest::Approx((K - t) / (t + 1.0) / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic T_m matches the scheduler on integer instances") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    const auto inst = testing::random_integer_instance(rng);
    const auto alloc = allocate_memory(inst.rates, inst.M, inst.K);
    REQUIRE(alloc.full_support());
    const auto plan = build_delivery_plan(place_cache(alloc, inst.K), inst.users, inst.rates);
    CHECK(std::abs(analytic_tm(alloc, inst.rates, inst.users) - plan.total_time) <=
          1e-9 * plan.total_time);
  }
}

TEST_CASE("T_m never exceeds T_u, and T_u = K gamma under full support") {
  std::mt19937_64 rng(123);
  for (int n = 0; n < 500; ++n) {
    const auto inst = testing::random_lp_instance(rng);
    const auto alloc = allocate_memory(inst.rates, inst.M, inst.K);
    UserRealization u;
    std::uniform_int_distribution<int> s(0, static_cast<int>(inst.rates.size()) - 1);
    for (int i = 0; i < inst.K; ++i) u.states.push_back(s(rng));
    const double tm = analytic_tm(alloc, inst.rates, u);
    const double tu = analytic_tu(alloc, inst.rates, u);
    CHECK(tm <= tu * (1 + 1e-12));
    if (alloc.full_support()) CHECK(tu == doctest::Approx(inst.K * alloc.gamma).epsilon(1e-10));
  }
}

TEST_CASE("uncached user removes the multicast gain") {
  const VectorXd r = vec({1, 1000});
  const auto alloc = allocate_memory(r, 0.5, 2);
  REQUIRE(alloc.m(1) == 0.0);
  const UserRealization u{{0, 1}};
  CHECK(analytic_tm(alloc, r, u) == analytic_tu(alloc, r, u));
}

TEST_CASE("optimality bound chain") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int n = 0; n < 400; ++n) {
    const auto inst = testing::random_lp_instance(rng);
    const auto alloc = allocate_memory(inst.rates, inst.M, inst.K);
    if (!alloc.full_support()) continue;
    ++checked;
    UserRealization u;
    std::uniform_int_distribution<int> s(0, static_cast<int>(inst.rates.size()) - 1);
    for (int i = 0; i < inst.K; ++i) u.states.push_back(s(rng));
    const double ratio = analytic_tm(alloc, inst.rates, u) /
                         optimal_time_lower_bound(inst.rates, inst.M, inst.K);
    CHECK(ratio <= optimality_bound(inst.rates, alloc, inst.M, inst.K).rhs * (1 + 1e-12));
  }
  CHECK(checked > 50);

  const auto alloc = allocate_memory(kRates, 2.25, 4);
  const auto b = optimality_bound(kRates, alloc, 2.25, 1 << 20);
  CHECK(b.rhs == doctest::Approx(b.large_k_limit).epsilon(1e-5));
  CHECK(b.large_k_limit == doctest::Approx(3 * 2.25 / (0.25 * 11)).epsilon(1e-14));
}

TEST_CASE("max file size") {
  RoomConfig<> cfg;
  const double M = 60;
  const auto r = max_file_size(1.0, cfg, M);
  REQUIRE(r.full_support);
  CHECK(std::abs(r.bits - r.closed_form_bits) <= 1e-6 * r.closed_form_bits);

  // Independent closed form from the physical rates.
  double sum = 0;
  const auto grid = build_grid(cfg);
  for (int j = 0; j < grid.num_states(); ++j) sum += grid.rate(j) * cfg.file_bits;
  CHECK(r.closed_form_bits == doctest::Approx(sum / (121 - M)).epsilon(1e-12));

  auto wide = cfg;
  wide.bandwidth_hz *= 2;
  CHECK(max_file_size(1.0, wide, M).bits == doctest::Approx(2 * r.bits).epsilon(3e-6));

  // Round trip: the deadline met by F0 gives back F0.
  const double F0 = 2e9;
  cfg.file_bits = F0;
  const double deadline = allocate_memory(build_grid(cfg).rate, M, 1).gamma * (1 + 1e-9);
  CHECK(std::abs(max_file_size(deadline, cfg, M).bits - F0) <= 1e-6 * F0);

  CHECK_THROWS_AS(max_file_size(1e-30, cfg, M), InfeasibleError);
  CHECK_THROWS_AS(max_file_size(-1.0, cfg, M), ConfigError);
}

TEST_CASE("evaluation CSV") {
  const auto alloc = allocate_memory(kRates, 2.25, 4);
  std::ostringstream os;
  write_evaluation_csv(os, evaluate(kRates, alloc, 2.25, kUsers));
  CHECK(os.str() ==
        "K,M,S,t_hat,T_m,T_u,T_x,gain_unicast,gain_baseline,bound_rhs\n"
        "4,2.25,5,1,0.5,1,0.408333333333,2,0.816666666667,1.90909090909\n");
}
