#pragma once

#include <span>
#include <string>
#include <vector>

#include "sobolcap/error.hpp"
#include "sobolcap/subset.hpp"

namespace sobolcap {

/// A real-valued set function on 2^C, stored by subset bitmask.
///
/// The tag distinguishes the coordinate system (capacity, Banzhaf
/// interaction, Fourier) so the transforms cannot be fed the wrong vector.
/// Construction checks only the length; axioms are checked by validate().
template <class Tag>
class SetFunction {
public:
  SetFunction(CriteriaIndex index, std::vector<double> values)
      : index_(index), values_(std::move(values)) {
    check_length();
  }

  /// All-zero function on m criteria.
  explicit SetFunction(CriteriaIndex index) : index_(index), values_(index.subset_count(), 0.0) {}

  /// Builds from a list in display order (see CriteriaIndex::display_order).
  static SetFunction from_display_order(CriteriaIndex index, std::span<const double> listed) {
    SetFunction out(index);
    const auto order = index.display_order();
    if (listed.size() != order.size()) {
      out.throw_length(listed.size());
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      out.values_[order[i]] = listed[i];
    }
    return out;
  }

  const CriteriaIndex& index() const { return index_; }
  int criteria() const { return index_.count(); }
  double operator[](Subset s) const { return values_[s]; }
  std::span<const double> values() const { return values_; }

  std::vector<double> display_order() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (Subset s : index_.display_order()) {
      out.push_back(values_[s]);
    }
    return out;
  }

  friend bool operator==(const SetFunction&, const SetFunction&) = default;

private:
  void check_length() const {
    if (values_.size() != index_.subset_count()) {
      throw_length(values_.size());
    }
  }
  [[noreturn]] void throw_length(std::size_t got) const {
    throw DimensionError("set function on " + std::to_string(index_.count()) + " criteria needs " +
                         std::to_string(index_.subset_count()) + " values, got " + std::to_string(got));
  }

  CriteriaIndex index_;
  std::vector<double> values_;
};

struct CapacityTag {};
struct InteractionTag {};
struct FourierTag {};
struct MobiusTag {};

/// μ: 2^C -> R, μ(∅) = 0, μ(C) = 1, monotone when valid.
using Capacity = SetFunction<CapacityTag>;
/// Banzhaf interaction indices I^B(A).
using InteractionVector = SetFunction<InteractionTag>;
/// Fourier coefficients μ̂(A) = (-1/2)^{|A|} I^B(A).
using FourierVector = SetFunction<FourierTag>;
/// Möbius masses; μ(A) = Σ_{B⊆A} mass(B).
using MobiusVector = SetFunction<MobiusTag>;

/// Additive capacity μ(A) = Σ_{j∈A} w_j.
Capacity additive_capacity(std::span<const double> weights);

// Transforms. All are exact linear maps computed by an O(m 2^m) per-bit pass.

InteractionVector banzhaf_from_capacity(const Capacity& mu);
Capacity capacity_from_banzhaf(const InteractionVector& ib);
FourierVector fourier_from_banzhaf(const InteractionVector& ib);
MobiusVector mobius_from_capacity(const Capacity& mu);
Capacity capacity_from_mobius(const MobiusVector& mass);

/// Banzhaf power index φ^B_j by direct marginal-contribution sum.
double power_index(const Capacity& mu, int j);

/// Pairwise Banzhaf interaction I^B_{j,k} by direct second-difference sum.
/// Throws ArgumentError when j == k.
double pair_interaction(const Capacity& mu, int j, int k);

struct MonotonicityViolation {
  Subset lower;
  Subset upper;  ///< lower ∪ {j}
  double drop;   ///< μ(lower) - μ(upper) > tolerance
};

struct ValidationReport {
  bool bounded = false;
  std::vector<MonotonicityViolation> violations;

  bool ok() const { return bounded && violations.empty(); }
  std::string describe() const;
};

inline constexpr double kDefaultMonotonicityTolerance = 1e-12;

/// Checks boundedness and monotonicity over adjacent pairs (A, A ∪ {j}),
/// which is equivalent to the full A ⊆ B condition.
ValidationReport validate(const Capacity& mu, double tolerance = kDefaultMonotonicityTolerance);

/// True iff |I^B(A)| <= tolerance for every |A| >= 3.
bool is_two_additive(const InteractionVector& ib, double tolerance);

/// Parameters of a 2-additive capacity: singleton capacities and pair capacities.
///
/// Pairs are held in display order ({1,2}, {1,3}, ..., {m-1,m}). The Möbius mass of
/// pair {j,k} is μ({j,k}) - μ({j}) - μ({k}); all higher masses are zero.
struct TwoAdditiveCoordinates {
  std::vector<double> singletons;
  std::vector<double> pairs;

  int criteria() const { return static_cast<int>(singletons.size()); }
  double pair_mass(std::size_t pair_slot) const;
  Capacity to_capacity() const;
};

/// (j, k) criterion pairs, j < k, in display order.
std::vector<std::pair<int, int>> pair_list(int m);

}  // namespace sobolcap
