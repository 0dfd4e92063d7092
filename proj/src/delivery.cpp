#include "lcc/delivery.hpp"

#include "lcc/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace lcc {

namespace {

std::uint64_t cursor_key(int user, UserSet subset) {
  return (static_cast<std::uint64_t>(user) << 32) | subset.mask();
}

void check_inputs(const CachePlacement& placement, const UserRealization& realization,
                  const VectorXd& rates) {
  const int K = placement.num_users();
  if (realization.num_users() != K)
    throw ConfigError("realization",
                      fmt::format("has {} users, placement has {}", realization.num_users(), K));
  if (rates.size() != placement.num_states())
    throw ConfigError("rates", fmt::format("has {} states, placement has {}", rates.size(),
                                           placement.num_states()));
  for (int i = 0; i < K; ++i) {
    const int s = realization.states[i];
    if (s < 0 || s >= placement.num_states())
      throw ConfigError("realization", fmt::format("user {} is in unknown state {}", i + 1, s + 1));
    if (!(rates(s) > 0))
      throw ConfigError("rates", fmt::format("rate of state {} must be positive", s + 1));
  }
}

}  // namespace

DeliveryPlan build_delivery_plan(const CachePlacement& placement,
                                 const UserRealization& realization, const VectorXd& rates) {
  check_inputs(placement, realization, rates);
  const int K = placement.num_users();

  DeliveryPlan plan;
  std::vector<int> diverted;
  for (int i = 0; i < K; ++i) {
    if (placement.t(realization.states[i]) >= 1)
      plan.multicast_users.push_back(i);
    else
      diverted.push_back(i);
  }

  std::unordered_map<std::uint64_t, int> cursor;
  std::vector<int> alpha(K, 1);

  if (!plan.multicast_users.empty()) {
    plan.t_hat = K;
    for (int i : plan.multicast_users)
      plan.t_hat = std::min(plan.t_hat, placement.t(realization.states[i]));
    const int t_hat = plan.t_hat;
    for (int i : plan.multicast_users)
      alpha[i] = static_cast<int>(binomial(placement.t(realization.states[i]), t_hat));

    for_each_subset(plan.multicast_users, t_hat + 1, [&](UserSet group) {
      std::vector<int> outside;
      for (int u = 0; u < K; ++u)
        if (!group.contains(u)) outside.push_back(u);

      Codeword cw;
      cw.group = group;
      for (int i : group.members()) {
        const int state = realization.states[i];
        const auto& sp = placement.state(state);
        const UserSet others = group.without(i);
        const Rational chunk_size = sp.subfile_size / static_cast<std::int64_t>(alpha[i]);

        Payload p;
        p.user = i;
        // V = others + (t_i - t_hat) users from outside the group. Adding a fixed
        // disjoint set preserves lexicographic order, so the V are visited in order.
        for_each_subset(outside, sp.t - t_hat, [&](UserSet extra) {
          const UserSet v = others | extra;
          int& q = cursor[cursor_key(i, v)];
          ++q;
          if (q > alpha[i])
            throw std::logic_error(fmt::format("subfile {}/{} of user {} chunked past alpha = {}",
                                               state + 1, format_members(v), i + 1, alpha[i]));
          p.chunks.push_back({{state, v}, q, chunk_size});
          p.volume += chunk_size;
        });
        p.time = to_double(p.volume) / rates(state);
        cw.duration = std::max(cw.duration, p.time);
        cw.payloads.push_back(std::move(p));
      }
      plan.total_time += cw.duration;
      plan.codewords.push_back(std::move(cw));
    });
  }

  // Whatever the multicast phase did not carry goes point-to-point.
  for (int i = 0; i < K; ++i) {
    const int state = realization.states[i];
    const auto& sp = placement.state(state);
    const Rational chunk_size = sp.subfile_size / static_cast<std::int64_t>(alpha[i]);
    UnicastLeg leg;
    leg.user = i;
    for (UserSet v : sp.subfiles) {
      if (v.contains(i)) continue;
      const auto it = cursor.find(cursor_key(i, v));
      const int sent = it == cursor.end() ? 0 : it->second;
      for (int q = sent + 1; q <= alpha[i]; ++q) {
        leg.chunks.push_back({{state, v}, q, chunk_size});
        leg.volume += chunk_size;
      }
    }
    if (leg.chunks.empty()) continue;
    if (diverted.empty())
      throw std::logic_error(
          fmt::format("user {} left with undelivered chunks in a pure multicast plan", i + 1));
    leg.time = to_double(leg.volume) / rates(state);
    plan.total_time += leg.time;
    plan.unicast_legs.push_back(std::move(leg));
  }
  return plan;
}

CertificationReport certify_plan(const CachePlacement& placement,
                                 const UserRealization& realization, const DeliveryPlan& plan) {
  const int K = placement.num_users();
  CertificationReport report;
  report.delivered.assign(K, Rational{0});
  report.cached.assign(K, Rational{0});

  auto fail = [&](int user, int codeword, char check, std::string msg) {
    report.failures.push_back({user, codeword, check, std::move(msg)});
  };
  if (realization.num_users() != K) {
    fail(-1, -1, 'b', "realization and placement disagree on the user count");
    return report;
  }

  std::set<std::tuple<int, int, std::uint32_t, int>> seen;
  auto receive = [&](int user, int codeword, const ChunkRef& c) {
    const int state = realization.states[user];
    if (!seen.emplace(user, c.subfile.state, c.subfile.users.mask(), c.chunk_index).second)
      fail(user, codeword, 'a', fmt::format("chunk {} delivered twice", format_chunk(c)));
    if (c.subfile.state != state)
      fail(user, codeword, 'b',
           fmt::format("chunk {} belongs to state {}, user is in state {}", format_chunk(c),
                       c.subfile.state + 1, state + 1));
    if (c.subfile.users.contains(user))
      fail(user, codeword, 'b', fmt::format("chunk {} is already cached", format_chunk(c)));
    if (c.chunk_index < 1)
      fail(user, codeword, 'b', fmt::format("chunk {} has a bad index", format_chunk(c)));
    report.delivered[user] += c.size;
  };

  for (int w = 0; w < static_cast<int>(plan.codewords.size()); ++w) {
    const auto& cw = plan.codewords[w];
    for (const auto& p : cw.payloads) {
      if (!cw.group.contains(p.user))
        fail(p.user, w, 'e', "payload addressed to a user outside the group");
      for (const auto& c : p.chunks) {
        receive(p.user, w, c);
        for (int other : cw.group.members()) {
          if (other != p.user && !c.subfile.users.contains(other))
            fail(other, w, 'e',
                 fmt::format("user {} cannot cancel chunk {} meant for user {}", other + 1,
                             format_chunk(c), p.user + 1));
        }
      }
    }
  }
  for (const auto& leg : plan.unicast_legs)
    for (const auto& c : leg.chunks) receive(leg.user, -1, c);

  for (int i = 0; i < K; ++i) {
    const int state = realization.states[i];
    const auto& sp = placement.state(state);
    std::int64_t held = 0;
    for (UserSet v : sp.subfiles) held += v.contains(i) ? 1 : 0;
    report.cached[i] = sp.subfile_size * held;

    const Rational expected = Rational(1) - Rational(sp.t, K);
    if (report.delivered[i] != expected)
      fail(i, -1, 'c',
           fmt::format("delivered {} but needs {}", format_rational(report.delivered[i]),
                       format_rational(expected)));
    if (report.cached[i] + report.delivered[i] != Rational(1))
      fail(i, -1, 'd',
           fmt::format("cached {} + delivered {} != 1", format_rational(report.cached[i]),
                       format_rational(report.delivered[i])));
  }
  return report;
}

std::string format_chunk(const ChunkRef& c) {
  std::string users = c.subfile.users.empty() ? "-" : format_members(c.subfile.users, '.');
  return fmt::format("{}/{}:{}", c.subfile.state + 1, users, c.chunk_index);
}

namespace {

std::string join_chunks(const std::vector<ChunkRef>& chunks) {
  std::string out;
  for (const auto& c : chunks) {
    if (!out.empty()) out += ',';
    out += format_chunk(c);
  }
  return out;
}

}  // namespace

void write_plan_dump(std::ostream& os, const DeliveryPlan& plan) {
  for (const auto& cw : plan.codewords) {
    os << fmt::format("group={} dur={:.12g}", format_members(cw.group), cw.duration);
    for (const auto& p : cw.payloads)
      os << fmt::format(" payload[{}]={}", p.user + 1, join_chunks(p.chunks));
    os << '\n';
  }
  for (const auto& leg : plan.unicast_legs)
    os << fmt::format("unicast user={} dur={:.12g} payload={}\n", leg.user + 1, leg.time,
                      join_chunks(leg.chunks));
  os << fmt::format("total_time={:.12g}\n", plan.total_time);
}

void write_certification(std::ostream& os, const CertificationReport& report) {
  for (std::size_t i = 0; i < report.delivered.size(); ++i)
    os << fmt::format("user={} cached={} delivered={}\n", i + 1,
                      format_rational(report.cached[i]), format_rational(report.delivered[i]));
  for (const auto& f : report.failures)
    os << fmt::format("FAIL check={} user={} codeword={} {}\n", f.check, f.user + 1,
                      f.codeword < 0 ? std::string("-") : std::to_string(f.codeword + 1),
                      f.message);
  os << (report.passed() ? "certification PASS\n" : "certification FAIL\n");
}

}  // namespace lcc
