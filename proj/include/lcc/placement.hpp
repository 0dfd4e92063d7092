#pragma once

// State-wise uncoded cache placement: the file of state j is split into
// C(K, t(j)) equal subfiles, one per t(j)-subset V of users, and subfile
// W_V(j) is cached by exactly the users in V.

#include "lcc/allocation.hpp"
#include "lcc/combinatorics.hpp"
#include "lcc/types.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace lcc {

struct SubfileId {
  int state = 0;
  UserSet users;

  friend bool operator==(const SubfileId&, const SubfileId&) = default;
};

struct StatePlacement {
  int t = 0;
  Rational subfile_size{1};
  std::vector<UserSet> subfiles;  // lexicographic; index == lex_rank
};

class CachePlacement {
 public:
  CachePlacement(int num_users, std::vector<StatePlacement> states,
                 std::vector<std::string> warnings);

  int num_users() const { return num_users_; }
  int num_states() const { return static_cast<int>(states_.size()); }
  const StatePlacement& state(int j) const { return states_.at(j); }
  int t(int j) const { return states_.at(j).t; }
  std::vector<int> multiplicities() const;

  /// States with t(j) = 0 produce a warning: nobody caches them.
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool caches(int user, const SubfileId& id) const { return id.users.contains(user); }

  /// Every subfile the user holds, by state then lexicographic subset.
  std::vector<SubfileId> cached_by(int user) const;

 private:
  int num_users_;
  std::vector<StatePlacement> states_;
  std::vector<std::string> warnings_;
};

/// Throws IntegralityError unless 0 <= t(j) <= K for every state.
CachePlacement place_cache(std::span<const int> t, int num_users);

/// Same, validating that K * m(j) is integral first.
CachePlacement place_cache(const MemoryAllocation<double>& alloc, int num_users);

Rational cache_volume(const CachePlacement& placement, int user);

/// One line per subfile: `state=<j> subset=<i1,i2,...> size=<p/q>`, 1-based.
void write_placement_dump(std::ostream& os, const CachePlacement& placement);

std::string format_rational(const Rational& q);

}  // namespace lcc
