#pragma once

// Closed-form delivery times and bounds.
//
//   T_m = K / (t_hat + 1) * gamma           proposed multi-rate scheme
//   T_u = sum_i (1 - m(s_i)) / r(s_i)       unicast
//   T_x                                     uniform placement m(j) = M/S with
//                                           each multicast limited by its slowest user

#include "lcc/allocation.hpp"
#include "lcc/combinatorics.hpp"
#include "lcc/delivery.hpp"
#include "lcc/env_model.hpp"
#include "lcc/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

namespace lcc {

template <class Scalar = double>
struct EvaluationResult {
  int num_users = 0;
  Scalar M = 0;
  int num_states = 0;
  Scalar t_hat = 0;
  Scalar t_m = 0;
  Scalar t_u = 0;
  Scalar t_x = 0;
  Scalar gain_unicast = 0;   // T_u / T_m
  Scalar gain_baseline = 0;  // T_x / T_m
  Scalar bound_rhs = 0;
};

namespace detail {

template <class Scalar>
void check_realization(const UserRealization& realization, Eigen::Index num_states) {
  if (realization.num_users() < 1) throw ConfigError("realization", "must contain a user");
  for (int i = 0; i < realization.num_users(); ++i) {
    const int s = realization.states[i];
    if (s < 0 || s >= num_states)
      throw ConfigError("realization", fmt::format("user {} is in unknown state {}", i + 1, s + 1));
  }
}

}  // namespace detail

/// min_i K m(s_i) over the realized users.
template <class Scalar>
Scalar common_cache_ratio(const MemoryAllocation<Scalar>& alloc,
                          const UserRealization& realization) {
  detail::check_realization<Scalar>(realization, alloc.num_states());
  const Scalar K = static_cast<Scalar>(realization.num_users());
  Scalar t_hat = std::numeric_limits<Scalar>::infinity();
  for (int s : realization.states) t_hat = std::min(t_hat, K * alloc.m(s));
  return t_hat;
}

template <class Scalar>
Scalar analytic_tu(const MemoryAllocation<Scalar>& alloc, const Vector<Scalar>& rates,
                   const UserRealization& realization) {
  detail::check_realization<Scalar>(realization, rates.size());
  Scalar total = 0;
  for (int s : realization.states) total += (Scalar(1) - alloc.m(s)) / rates(s);
  return total;
}

/// K / (t_hat + 1) * gamma, with real-valued t_hat. gamma equals (S - M) / sum_j r(j)
/// under full support. A realized user in an uncached state removes the
/// multicast gain and the result is T_u.
template <class Scalar>
Scalar analytic_tm(const MemoryAllocation<Scalar>& alloc, const Vector<Scalar>& rates,
                   const UserRealization& realization) {
  const Scalar t_hat = common_cache_ratio(alloc, realization);
  if (!(t_hat > Scalar(0))) return analytic_tu(alloc, rates, realization);
  return static_cast<Scalar>(realization.num_users()) / (t_hat + Scalar(1)) * alloc.gamma;
}

/// Delivery time of uniform placement with integer multiplicity t for users at
/// the given rates: sum over (t+1)-subsets U of (1 / C(K, t)) / min_{i in U} r_i.
///
/// Sorted ascending, the k-th rate is the group minimum for C(K-1-k, t) groups.
template <class Scalar>
Scalar uniform_scheme_time(std::vector<Scalar> user_rates, int t) {
  const int K = static_cast<int>(user_rates.size());
  if (t >= K) return Scalar(0);
  if (t <= 0) {
    Scalar total = 0;
    for (Scalar r : user_rates) total += Scalar(1) / r;
    return total;
  }
  std::sort(user_rates.begin(), user_rates.end());
  Scalar total = 0;
  for (int k = 0; k < K; ++k)
    total += static_cast<Scalar>(binomial(K - 1 - k, t)) / user_rates[k];
  return total / static_cast<Scalar>(binomial(K, t));
}

template <class Scalar = double>
struct BaselineTimes {
  Scalar t = 0;  // K M / S
  Scalar floor_scheme = 0;
  Scalar ceil_scheme = 0;
  Scalar interpolated = 0;  // memory sharing between floor and ceiling
};

template <class Scalar>
BaselineTimes<Scalar> baseline_tx_detail(const Vector<Scalar>& rates, Scalar M,
                                         const UserRealization& realization) {
  detail::check_realization<Scalar>(realization, rates.size());
  const int K = realization.num_users();
  const Scalar S = static_cast<Scalar>(rates.size());
  std::vector<Scalar> user_rates;
  user_rates.reserve(K);
  for (int s : realization.states) user_rates.push_back(rates(s));

  BaselineTimes<Scalar> out;
  out.t = static_cast<Scalar>(K) * M / S;
  using std::floor;
  using std::round;
  const bool snapped = std::abs(static_cast<double>(out.t - round(out.t))) < 1e-9;
  const Scalar lo = snapped ? round(out.t) : floor(out.t);
  const Scalar frac = snapped ? Scalar(0) : out.t - lo;
  const int lo_i = static_cast<int>(lo);
  out.floor_scheme = uniform_scheme_time(user_rates, lo_i);
  out.ceil_scheme = frac > Scalar(0) ? uniform_scheme_time(user_rates, lo_i + 1) : out.floor_scheme;
  out.interpolated = (Scalar(1) - frac) * out.floor_scheme + frac * out.ceil_scheme;
  return out;
}

/// Uniform-placement baseline T_x; non-integer K M / S uses memory sharing.
template <class Scalar>
Scalar baseline_tx(const Vector<Scalar>& rates, Scalar M, const UserRealization& realization) {
  return baseline_tx_detail(rates, M, realization).interpolated;
}

template <class Scalar = double>
struct OptimalityBound {
  Scalar rhs = 0;          // bound on T_m / T*
  Scalar large_k_limit = 0;  // r_max M / (m_min sum r)
  Scalar large_s_bound = 0;  // r_max / (K (m_min + 1/K) r_min)
};

/// Gap to the best uncoded-placement scheme:
///   T_m / T* <= r_max / ((m_min + 1/K) sum_j r(j)) * (S/K + M).
template <class Scalar>
OptimalityBound<Scalar> optimality_bound(const Vector<Scalar>& rates,
                                         const MemoryAllocation<Scalar>& alloc, Scalar M, int K) {
  const Scalar S = static_cast<Scalar>(rates.size());
  const Scalar kk = static_cast<Scalar>(K);
  const Scalar r_max = rates.maxCoeff();
  const Scalar r_min = rates.minCoeff();
  const Scalar r_sum = rates.sum();
  const Scalar m_min = alloc.m.minCoeff();
  OptimalityBound<Scalar> b;
  b.rhs = r_max / ((m_min + Scalar(1) / kk) * r_sum) * (S / kk + M);
  b.large_k_limit = m_min > Scalar(0) ? r_max * M / (m_min * r_sum)
                                      : std::numeric_limits<Scalar>::infinity();
  b.large_s_bound = r_max / (kk * (m_min + Scalar(1) / kk) * r_min);
  return b;
}

/// Lower bound on T*: every state served at the best rate r_max,
///   K (S - M) / (S + K M) / r_max.
template <class Scalar>
Scalar optimal_time_lower_bound(const Vector<Scalar>& rates, Scalar M, int K) {
  const Scalar S = static_cast<Scalar>(rates.size());
  const Scalar kk = static_cast<Scalar>(K);
  return kk * (S - M) / ((S + kk * M) * rates.maxCoeff());
}

template <class Scalar>
EvaluationResult<Scalar> evaluate(const Vector<Scalar>& rates, const MemoryAllocation<Scalar>& alloc,
                                  Scalar M, const UserRealization& realization) {
  EvaluationResult<Scalar> r;
  r.num_users = realization.num_users();
  r.M = M;
  r.num_states = static_cast<int>(rates.size());
  r.t_hat = common_cache_ratio(alloc, realization);
  r.t_m = analytic_tm(alloc, rates, realization);
  r.t_u = analytic_tu(alloc, rates, realization);
  r.t_x = baseline_tx(rates, M, realization);
  r.gain_unicast = r.t_u / r.t_m;
  r.gain_baseline = r.t_x / r.t_m;
  r.bound_rhs = optimality_bound(rates, alloc, M, r.num_users).rhs;
  return r;
}

/// CSV header plus one row: K, M, S, t_hat, T_m, T_u, T_x, gain_unicast, gain_baseline, bound_rhs.
template <class Scalar>
void write_evaluation_csv(std::ostream& os, const EvaluationResult<Scalar>& r) {
  auto d = [](Scalar v) { return static_cast<double>(v); };
  os << "K,M,S,t_hat,T_m,T_u,T_x,gain_unicast,gain_baseline,bound_rhs\n";
  os << fmt::format("{},{:.12g},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n",
                    r.num_users, d(r.M), r.num_states, d(r.t_hat), d(r.t_m), d(r.t_u), d(r.t_x),
                    d(r.gain_unicast), d(r.gain_baseline), d(r.bound_rhs));
}

template <class Scalar = double>
struct FileSizeResult {
  Scalar bits = 0;
  Scalar closed_form_bits = 0;  // NaN unless the allocation has full support
  bool full_support = false;
  int iterations = 0;
};

/// Largest file size F (bits) whose optimal worst-case delivery time meets the
/// deadline, by bisection over F. Relative tolerance 1e-6.
template <class Scalar>
FileSizeResult<Scalar> max_file_size(Scalar deadline, RoomConfig<Scalar> cfg, Scalar M) {
  if (!(deadline > Scalar(0))) throw ConfigError("deadline", "must be positive");
  validate(cfg);
  auto gamma_at = [&](Scalar bits) {
    cfg.file_bits = bits;
    const auto grid = build_grid(cfg);
    return allocate_memory(grid.rate, M, 1).gamma;
  };
  auto feasible = [&](Scalar bits) { return gamma_at(bits) <= deadline; };

  FileSizeResult<Scalar> out;
  if (!feasible(Scalar(1)))
    throw InfeasibleError(
        fmt::format("deadline {} s cannot be met even for a 1-bit file", static_cast<double>(deadline)));

  Scalar lo = 1;
  Scalar hi = 2;
  while (feasible(hi)) {
    lo = hi;
    hi *= 2;
    if (!std::isfinite(static_cast<double>(hi))) throw InfeasibleError("file size unbounded");
  }
  const Scalar rel_tol = Scalar(1e-6);
  while ((hi - lo) > rel_tol * lo) {
    const Scalar mid = lo + (hi - lo) / 2;
    (feasible(mid) ? lo : hi) = mid;
    ++out.iterations;
  }
  out.bits = lo;

  cfg.file_bits = 1;
  const auto grid = build_grid(cfg);
  const auto alloc = allocate_memory(grid.rate, M, 1);
  out.full_support = alloc.full_support();
  if (out.full_support) {
    // With F = 1 the normalized rate is B * log2(1 + SNR), the unnormalized rate.
    out.closed_form_bits = deadline * grid.rate.sum() / (static_cast<Scalar>(grid.num_states()) - M);
  } else {
    out.closed_form_bits = std::numeric_limits<Scalar>::quiet_NaN();
  }
  return out;
}

}  // namespace lcc
