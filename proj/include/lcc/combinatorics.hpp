#pragma once

// Binomial coefficients and fixed-size subsets of a small universe {0..n-1},
// always visited in lexicographic order of their sorted members.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lcc {

/// Exact C(n, k) for 0 <= n <= 62; 0 when k < 0 or k > n.
std::uint64_t binomial(int n, int k);

/// A set of user indices in {0..31}, stored as a bitmask.
class UserSet {
 public:
  static constexpr int kMaxUsers = 32;

  constexpr UserSet() = default;
  constexpr explicit UserSet(std::uint32_t mask) : mask_(mask) {}
  static UserSet of(std::span<const int> members);

  constexpr std::uint32_t mask() const { return mask_; }
  int size() const;
  bool empty() const { return mask_ == 0; }
  bool contains(int user) const { return (mask_ >> user) & 1u; }
  bool includes(UserSet other) const { return (other.mask_ & ~mask_) == 0; }

  UserSet with(int user) const { return UserSet(mask_ | (1u << user)); }
  UserSet without(int user) const { return UserSet(mask_ & ~(1u << user)); }
  UserSet operator|(UserSet o) const { return UserSet(mask_ | o.mask_); }

  /// Sorted members.
  std::vector<int> members() const;

  friend bool operator==(UserSet, UserSet) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// Lexicographic order of sorted member sequences (a shorter prefix sorts first).
bool lex_less(UserSet a, UserSet b);

/// Position of `subset` among all |subset|-subsets of {0..n-1} in lexicographic order.
std::uint64_t lex_rank(UserSet subset, int n);

/// Inverse of lex_rank.
UserSet lex_unrank(std::uint64_t rank, int n, int k);

/// Calls `visit` for every k-subset of `universe`, in lexicographic order.
void for_each_subset(std::span<const int> universe, int k,
                     const std::function<void(UserSet)>& visit);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<UserSet> subsets_of(int n, int k);

/// Members joined by `sep`, 1-based, e.g. "1,3,4".
std::string format_members(UserSet s, char sep = ',');

}  // namespace lcc
