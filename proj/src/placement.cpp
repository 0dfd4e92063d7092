#include "lcc/placement.hpp"

#include "lcc/error.hpp"

#include <fmt/format.h>

namespace lcc {

CachePlacement::CachePlacement(int num_users, std::vector<StatePlacement> states,
                               std::vector<std::string> warnings)
    : num_users_(num_users), states_(std::move(states)), warnings_(std::move(warnings)) {}

std::vector<int> CachePlacement::multiplicities() const {
  std::vector<int> t;
  t.reserve(states_.size());
  for (const auto& s : states_) t.push_back(s.t);
  return t;
}

std::vector<SubfileId> CachePlacement::cached_by(int user) const {
  std::vector<SubfileId> out;
  for (int j = 0; j < num_states(); ++j) {
    for (UserSet v : states_[j].subfiles) {
      if (v.contains(user)) out.push_back({j, v});
    }
  }
  return out;
}

CachePlacement place_cache(std::span<const int> t, int num_users) {
  if (num_users < 1 || num_users > UserSet::kMaxUsers)
    throw ConfigError("K", fmt::format("must be in [1, {}]", UserSet::kMaxUsers));
  std::vector<StatePlacement> states;
  std::vector<std::string> warnings;
  states.reserve(t.size());
  for (int j = 0; j < static_cast<int>(t.size()); ++j) {
    if (t[j] < 0 || t[j] > num_users)
      throw IntegralityError(j, fmt::format("t({}) = {} outside [0, {}]", j + 1, t[j], num_users));
    StatePlacement s;
    s.t = t[j];
    s.subfiles = subsets_of(num_users, t[j]);
    s.subfile_size = Rational(1, static_cast<std::int64_t>(s.subfiles.size()));
    if (t[j] == 0)
      warnings.push_back(
          fmt::format("state {} has t = 0: nothing cached, delivery falls back to unicast", j + 1));
    states.push_back(std::move(s));
  }
  return CachePlacement(num_users, std::move(states), std::move(warnings));
}

CachePlacement place_cache(const MemoryAllocation<double>& alloc, int num_users) {
  MemoryAllocation<double> scaled = alloc;
  scaled.t = alloc.m * static_cast<double>(num_users);
  const auto t = integral_multiplicities(scaled);
  return place_cache(t, num_users);
}

Rational cache_volume(const CachePlacement& placement, int user) {
  Rational total{0};
  for (int j = 0; j < placement.num_states(); ++j) {
    const auto& s = placement.state(j);
    std::int64_t held = 0;
    for (UserSet v : s.subfiles) held += v.contains(user) ? 1 : 0;
    total += s.subfile_size * held;
  }
  return total;
}

std::string format_rational(const Rational& q) {
  return fmt::format("{}/{}", q.numerator(), q.denominator());
}

void write_placement_dump(std::ostream& os, const CachePlacement& placement) {
  for (int j = 0; j < placement.num_states(); ++j) {
    const auto& s = placement.state(j);
    for (UserSet v : s.subfiles) {
      os << fmt::format("state={} subset={} size={}\n", j + 1, format_members(v),
                        format_rational(s.subfile_size));
    }
  }
}

}  // namespace lcc
