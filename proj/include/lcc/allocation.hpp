#pragma once

// Min-max cache memory allocation:
//
//   minimize gamma  s.t.  (1 - m(j)) / r(j) <= gamma,  sum_j m(j) = M,  0 <= m(j) <= 1.
//
// At the optimum every state that receives memory has the same delivery time
// (1 - m(j)) / r(j) = gamma, so on a support set P the solution is closed form:
//
//   gamma = (|P| - M) / sum_{j in P} r(j),   m(j) = 1 - gamma * r(j).
//
// allocate_memory finds P by active-set clamping; verify_allocation_bruteforce
// enumerates every P and is the independent check.

#include "lcc/error.hpp"
#include "lcc/types.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

namespace lcc {

template <class Scalar = double>
struct MemoryAllocation {
  Vector<Scalar> m;  // per-state share of each user's cache, in file units
  Vector<Scalar> t;  // K * m
  Scalar gamma = 0;  // worst-case single-user delivery time, seconds
  int num_users = 0;
  std::vector<int> support;  // states with m(j) > 0, ascending

  int num_states() const { return static_cast<int>(m.size()); }
  bool full_support() const { return static_cast<int>(support.size()) == num_states(); }
  Scalar total_memory() const { return m.sum(); }
};

namespace detail {

template <class Scalar>
void check_allocation_inputs(const Vector<Scalar>& rates, Scalar M, int K) {
  const auto S = rates.size();
  if (S == 0) throw ConfigError("rates", "must contain at least one state");
  for (Eigen::Index j = 0; j < S; ++j) {
    if (!(rates(j) > Scalar(0)))
      throw ConfigError("rates", fmt::format("rate of state {} must be positive", j + 1));
  }
  if (K < 1) throw ConfigError("K", "must be >= 1");
  if (!(M > Scalar(0))) throw AllocationError("cache size M must be positive");
  if (!(M < static_cast<Scalar>(S)))
    throw AllocationError(
        fmt::format("cache exceeds library: M = {} >= S = {}", static_cast<double>(M), S));
}

template <class Scalar>
MemoryAllocation<Scalar> finish(Vector<Scalar> m, Scalar gamma, int K) {
  MemoryAllocation<Scalar> out;
  out.m = std::move(m);
  out.t = out.m * static_cast<Scalar>(K);
  out.gamma = gamma;
  out.num_users = K;
  for (int j = 0; j < out.m.size(); ++j) {
    if (out.m(j) > Scalar(0)) out.support.push_back(j);
  }
  return out;
}

}  // namespace detail

/// Solves the min-max allocation LP exactly.
template <class Scalar>
MemoryAllocation<Scalar> allocate_memory(const Vector<Scalar>& rates, Scalar M, int K) {
  detail::check_allocation_inputs(rates, M, K);
  const int S = static_cast<int>(rates.size());

  enum class Status : unsigned char { Support, Empty, Full };
  std::vector<Status> status(S, Status::Support);
  Vector<Scalar> m(S);
  Scalar gamma = 0;

  // Each pass either terminates or clamps at least one state, so at most S passes.
  for (int pass = 0; pass <= S; ++pass) {
    Scalar free_memory = M;
    Scalar support_size = 0;
    Scalar support_rate = 0;
    for (int j = 0; j < S; ++j) {
      if (status[j] == Status::Full) free_memory -= Scalar(1);
      if (status[j] == Status::Support) {
        support_size += Scalar(1);
        support_rate += rates(j);
      }
    }
    gamma = (support_size - free_memory) / support_rate;

    bool clamped = false;
    for (int j = 0; j < S; ++j) {
      switch (status[j]) {
        case Status::Support: m(j) = Scalar(1) - gamma * rates(j); break;
        case Status::Empty: m(j) = Scalar(0); break;
        case Status::Full: m(j) = Scalar(1); break;
      }
    }
    // Clamp all violators of a kind at once; lower violations take priority.
    for (int j = 0; j < S; ++j) {
      if (status[j] == Status::Support && m(j) < Scalar(0)) {
        status[j] = Status::Empty;
        clamped = true;
      }
    }
    if (!clamped) {
      for (int j = 0; j < S; ++j) {
        if (status[j] == Status::Support && m(j) > Scalar(1)) {
          status[j] = Status::Full;
          clamped = true;
        }
      }
    }
    if (!clamped) break;
  }
  for (int j = 0; j < S; ++j) {
    if (status[j] != Status::Support) m(j) = status[j] == Status::Full ? Scalar(1) : Scalar(0);
  }
  return detail::finish(std::move(m), gamma, K);
}

/// Exhaustive support enumeration; only for S <= 12.
template <class Scalar>
MemoryAllocation<Scalar> verify_allocation_bruteforce(const Vector<Scalar>& rates, Scalar M,
                                                      int K) {
  constexpr int kMaxStates = 12;
  if (rates.size() > kMaxStates)
    throw OracleScopeError(
        fmt::format("brute-force allocation supports S <= {}, got {}", kMaxStates, rates.size()));
  detail::check_allocation_inputs(rates, M, K);
  const int S = static_cast<int>(rates.size());
  const Scalar tol = Scalar(1e-12);

  Scalar best_gamma = std::numeric_limits<Scalar>::infinity();
  Vector<Scalar> best_m;
  for (unsigned mask = 1; mask < (1u << S); ++mask) {
    Scalar size = 0;
    Scalar rate_sum = 0;
    for (int j = 0; j < S; ++j) {
      if (mask & (1u << j)) {
        size += Scalar(1);
        rate_sum += rates(j);
      }
    }
    const Scalar gamma = (size - M) / rate_sum;
    if (gamma < Scalar(0)) continue;
    Vector<Scalar> m = Vector<Scalar>::Zero(S);
    bool feasible = true;
    for (int j = 0; j < S && feasible; ++j) {
      if (mask & (1u << j)) {
        m(j) = Scalar(1) - gamma * rates(j);
        feasible = m(j) >= -tol && m(j) <= Scalar(1) + tol;
      } else {
        feasible = Scalar(1) / rates(j) <= gamma * (Scalar(1) + tol);
      }
    }
    if (feasible && gamma < best_gamma) {
      best_gamma = gamma;
      best_m = m.cwiseMax(Scalar(0));
    }
  }
  if (!std::isfinite(static_cast<double>(best_gamma)))
    throw AllocationError("brute-force allocation found no feasible support");
  return detail::finish(std::move(best_m), best_gamma, K);
}

/// Rounds every t(j) to an integer; throws IntegralityError naming the first
/// state farther than `tol` from one.
template <class Scalar>
std::vector<int> integral_multiplicities(const MemoryAllocation<Scalar>& alloc,
                                         double tol = 1e-6) {
  std::vector<int> t(alloc.num_states());
  for (int j = 0; j < alloc.num_states(); ++j) {
    const double v = static_cast<double>(alloc.t(j));
    const double r = std::round(v);
    if (std::abs(v - r) > tol)
      throw IntegralityError(j, fmt::format("t({}) = {} is not an integer", j + 1, v));
    t[j] = static_cast<int>(r);
  }
  return t;
}

/// CSV: state_index, rate, m, t, gamma (state_index 1-based).
template <class Scalar>
void write_allocation_csv(std::ostream& os, const Vector<Scalar>& rates,
                          const MemoryAllocation<Scalar>& alloc) {
  os << "state_index,rate,m,t,gamma\n";
  for (int j = 0; j < alloc.num_states(); ++j) {
    os << fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g}\n", j + 1,
                      static_cast<double>(rates(j)), static_cast<double>(alloc.m(j)),
                      static_cast<double>(alloc.t(j)), static_cast<double>(alloc.gamma));
  }
}

}  // namespace lcc
