#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobolcap/capacity.hpp"

namespace sobolcap {

/// n x m matrix of normalized evaluations v_ij in [0,1], row-major.
class DecisionMatrix {
public:
  /// Throws DimensionError on shape problems (n < 1, m < 2, ragged data) and
  /// DomainError naming the offending row/column for any entry outside [0,1].
  DecisionMatrix(std::size_t rows, std::size_t criteria, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t criteria() const { return criteria_; }

  double operator()(std::size_t row, std::size_t column) const { return values_[row * criteria_ + column]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * criteria_, criteria_);
  }
  /// Copy of column j (0-based).
  std::vector<double> column(std::size_t j) const;
  std::span<const double> data() const { return values_; }

  const std::vector<std::string>& criterion_names() const { return names_; }
  const std::optional<std::vector<std::string>>& labels() const { return labels_; }

  /// Defaults to "c1".."cm" when never set.
  void set_criterion_names(std::vector<std::string> names);
  void set_labels(std::vector<std::string> labels);

private:
  std::size_t rows_;
  std::size_t criteria_;
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::optional<std::vector<std::string>> labels_;
};

/// Nonnegative weights summing to one (within 1e-12).
class WeightVector {
public:
  explicit WeightVector(std::vector<double> weights);

  /// w_j = 1/m.
  static WeightVector equal(std::size_t m);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t j) const { return weights_[j]; }
  std::span<const double> values() const { return weights_; }

private:
  std::vector<double> weights_;
};

struct Ranking {
  std::vector<double> overall;
  std::vector<std::size_t> order;      ///< 0-based alternative indices, best first
  std::vector<std::size_t> positions;  ///< competition rank per alternative, 1 = best
};

/// r_i = Σ_j w_j v_ij.
std::vector<double> wam(const DecisionMatrix& v, const WeightVector& w);

/// Multilinear (Owen) extension of μ evaluated at every row.
///
/// Dispatches to the pairwise expansion when μ is 2-additive and to full
/// subset enumeration otherwise. Both paths are exposed for testing.
std::vector<double> multilinear(const DecisionMatrix& v, const Capacity& mu);

/// r_i = Σ_A μ(A) Π_{j∈A} v_ij Π_{j∉A} (1 - v_ij), O(2^m) per row.
std::vector<double> multilinear_full(const DecisionMatrix& v, const Capacity& mu);

/// r_i = I(∅) + Σ_j I_j (v_ij - 1/2) + Σ_{j<k} I_jk (v_ij - 1/2)(v_ik - 1/2).
/// Exact only for 2-additive capacities; higher-order interaction terms are ignored.
std::vector<double> multilinear_pairwise(const DecisionMatrix& v, const InteractionVector& ib);

/// Descending sort with ties broken by lower index; tied values share a position.
/// Throws DomainError on NaN.
Ranking rank(std::span<const double> overall);

}  // namespace sobolcap
