#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace sobolcap {

/// A subset of criteria encoded as a bitmask; bit j-1 stands for criterion j.
using Subset = std::uint32_t;

inline constexpr int kMaxCriteria = 20;

inline constexpr int cardinality(Subset s) { return std::popcount(s); }

inline constexpr Subset singleton(int criterion) { return Subset{1} << (criterion - 1); }

inline constexpr Subset pair_of(int j, int k) { return singleton(j) | singleton(k); }

inline constexpr bool contains(Subset s, int criterion) { return (s & singleton(criterion)) != 0; }

/// Number of criteria m together with the subset algebra of 2^C.
class CriteriaIndex {
public:
  /// Throws ArgumentError unless 1 <= m <= kMaxCriteria.
  explicit CriteriaIndex(int m);

  int count() const { return m_; }
  std::size_t subset_count() const { return std::size_t{1} << m_; }
  Subset full() const { return static_cast<Subset>(subset_count() - 1); }

  /// Throws ArgumentError if `criterion` is not in 1..m.
  void check_criterion(int criterion) const;

  /// Subsets in the display order [∅, {1}, ..., {m}, {1,2}, ..., {m-1,m}, ..., C]:
  /// by cardinality, then lexicographically on the sorted members.
  std::vector<Subset> display_order() const;

  /// All subsets of the given cardinality, in display order.
  std::vector<Subset> of_cardinality(int k) const;

  friend bool operator==(const CriteriaIndex&, const CriteriaIndex&) = default;

private:
  int m_;
};

/// Sorted 1-based members of `s`.
std::vector<int> members(Subset s);

/// "1,3" style rendering; the empty set renders as "".
std::string format_subset(Subset s);

/// Inverse of format_subset; tolerates surrounding braces and spaces.
Subset parse_subset(const std::string& text, int m);

}  // namespace sobolcap
