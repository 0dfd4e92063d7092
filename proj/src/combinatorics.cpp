#include "lcc/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace lcc {

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 62) throw std::out_of_range("binomial: n must be in [0, 62]");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  // r stays equal to C(n - k + i, i) after step i, so every division is exact.
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    r = (r / g) * (num / (i / g));
  }
  return r;
}

UserSet UserSet::of(std::span<const int> members) {
  std::uint32_t mask = 0;
  for (int u : members) {
    if (u < 0 || u >= kMaxUsers) throw std::out_of_range("UserSet: user index out of range");
    mask |= 1u << u;
  }
  return UserSet(mask);
}

int UserSet::size() const { return std::popcount(mask_); }

std::vector<int> UserSet::members() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

bool lex_less(UserSet a, UserSet b) {
  const auto x = a.members();
  const auto y = b.members();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::uint64_t lex_rank(UserSet subset, int n) {
  const auto c = subset.members();
  const int k = static_cast<int>(c.size());
  std::uint64_t rank = 0;
  int next = 0;
  for (int i = 0; i < k; ++i) {
    // Skip every subset whose i-th member is smaller than c[i].
    for (int x = next; x < c[i]; ++x) rank += binomial(n - 1 - x, k - 1 - i);
    next = c[i] + 1;
  }
  return rank;
}

UserSet lex_unrank(std::uint64_t rank, int n, int k) {
  if (rank >= binomial(n, k)) throw std::out_of_range("lex_unrank: rank out of range");
  std::uint32_t mask = 0;
  int x = 0;
  for (int i = 0; i < k; ++i) {
    for (;; ++x) {
      const std::uint64_t block = binomial(n - 1 - x, k - 1 - i);
      if (rank < block) break;
      rank -= block;
    }
    mask |= 1u << x;
    ++x;
  }
  return UserSet(mask);
}

void for_each_subset(std::span<const int> universe, int k,
                     const std::function<void(UserSet)>& visit) {
  const int n = static_cast<int>(universe.size());
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> sorted(universe.begin(), universe.end());
  std::sort(sorted.begin(), sorted.end());
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= 1u << sorted[i];
    visit(UserSet(mask));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<UserSet> subsets_of(int n, int k) {
  std::vector<int> universe(n);
  std::iota(universe.begin(), universe.end(), 0);
  std::vector<UserSet> out;
  out.reserve(binomial(n, k));
  for_each_subset(universe, k, [&](UserSet s) { out.push_back(s); });
  return out;
}

std::string format_members(UserSet s, char sep) {
  std::string out;
  for (int u : s.members()) {
    if (!out.empty()) out += sep;
    out += std::to_string(u + 1);
  }
  return out;
}

}  // namespace lcc
