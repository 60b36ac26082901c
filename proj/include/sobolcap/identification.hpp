#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sobolcap/aggregation.hpp"
#include "sobolcap/capacity.hpp"
#include "sobolcap/sobol.hpp"

namespace sobolcap {

struct IdentificationConfig {
  /// Common value of every μ({j}); defaults to 1/m.
  std::optional<double> singleton_value;
  /// Cardinalities whose Sobol' indices are equalized (each in {1, 2}).
  std::vector<int> objective_orders{1};
  SliceConfig slices;
  double gs_tolerance = 1e-6;
  double objective_tolerance = 1e-10;
  int max_outer_iterations = 500;
  std::uint64_t rng_seed = 0;
  /// Equalize Var[f_A] / Var[Y] instead of the raw variances.
  bool normalized = false;
  /// Number of starting points; the first is always the symmetric (additive) start.
  int starts = 1;

  double singleton_for(int m) const { return singleton_value.value_or(1.0 / m); }
  /// Throws ArgumentError on out-of-range tolerances, counts or orders.
  void check(int m) const;
};

/// Linear normalization binding the pair coordinates of a 2-additive
/// capacity with fixed singleton value s, derived from μ(C) = 1.
struct PairSumConstraint {
  double pair_capacity_sum = 0.0;  ///< Σ μ({j,k}) = m (m - 2) s + 1
  double pair_mass_sum = 0.0;      ///< Σ (μ({j,k}) - 2s) = 1 - m s
};

/// Throws ArgumentError for m < 2.
PairSumConstraint pair_constraint_targets(int m, double singleton_value);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

/// Range of μ(moving pair) keeping the capacity monotone while the balancing
/// pair absorbs the change (their sum held fixed) and all other pairs stay put.
///
/// Monotonicity of a 2-additive capacity is equivalent to
/// μ({j}) + Σ_k min(0, m_jk) >= 0 for every j, so the bounds are closed form.
/// Pair slots index pair_list(m). Throws ArgumentError when moving == balancing
/// and NumericalError when the current point itself is infeasible.
Interval feasible_interval(const TwoAdditiveCoordinates& current, std::size_t moving, std::size_t balancing);

/// Σ over unordered pairs of same-cardinality subsets of (S_A - S_D)^2, with
/// S from the slice estimator applied to Y = multilinear(V, μ).
double objective(const Capacity& mu, const DecisionMatrix& v, const IdentificationConfig& config);

/// The objective bound to one data set, with slice partitions prepared once.
class SobolBalanceObjective {
public:
  SobolBalanceObjective(const DecisionMatrix& v, const IdentificationConfig& config);

  double operator()(const Capacity& mu) const;

  /// Indices of the singletons {1}..{m} for μ (raw or normalized per config).
  std::vector<double> first_order(const Capacity& mu) const;

private:
  std::vector<double> indices(std::span<const double> y, std::span<const Subset> subsets) const;

  const DecisionMatrix& v_;
  bool normalized_;
  std::vector<std::vector<Subset>> levels_;
  SliceEstimator estimator_;
};

struct IdentificationResult {
  Capacity capacity;
  InteractionVector interactions;
  std::vector<double> sobol_before;  ///< raw first-order indices at the start point
  std::vector<double> sobol_after;   ///< raw first-order indices at the result
  std::vector<double> objective_trace;  ///< start value, then one value per outer iteration
  int iterations = 0;
  bool converged = false;
  int best_start = 0;
};

/// Unsupervised 2-additive capacity identification by randomized
/// golden-section coordinate search on the pair capacities.
///
/// Each outer step draws a (moving, balancing) pair of pair-coordinates,
/// golden-sections the moving one over its feasible interval while the
/// balancing one keeps the pair-sum constraint, and accepts the minimizer if
/// it lowers the objective. Stops after max_outer_iterations or after
/// 3 * (number of pairs) consecutive steps improving by less than
/// objective_tolerance. Throws ConfigError when no monotone 2-additive
/// capacity has the requested singleton value (that is, unless 0 < s <= 2/m).
IdentificationResult identify(const DecisionMatrix& v, const IdentificationConfig& config);

/// The symmetric feasible start: all pair capacities equal under the pair-sum
/// constraint. It is the additive capacity when s = 1/m.
TwoAdditiveCoordinates symmetric_start(int m, double singleton_value);

}  // namespace sobolcap
