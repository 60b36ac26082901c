#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sobolcap/aggregation.hpp"
#include "sobolcap/capacity.hpp"

namespace sobolcap {

/// Equal-width binning of [0,1] used by the slice estimator of E[Y | Z_D].
struct SliceConfig {
  int slice_count = 20;
  /// Rows in grid cells holding fewer rows than this are left out of variance sums.
  int min_slice_population = 1;

  /// Throws ArgumentError on slice_count < 2 or min_slice_population < 1.
  void check() const;
  /// False when n < 10 * slice_count; callers may warn.
  bool adequate_for(std::size_t rows) const;
};

/// One term f_A of the functional decomposition evaluated at each row.
struct HdmrTerm {
  Subset subset = 0;
  std::vector<double> values;
};

/// Assignment of every row to a cell of the |D|-dimensional slice grid.
///
/// A row's cell along criterion j is floor(v_ij * K), clamped to K - 1, so
/// the value 1.0 falls in the last slice. Conditioning on ∅ gives one cell.
class SlicePartition {
public:
  SlicePartition(const DecisionMatrix& v, Subset conditioning, const SliceConfig& config);

  Subset conditioning() const { return conditioning_; }
  std::size_t rows() const { return cell_.size(); }
  std::size_t cell_count() const { return population_.size(); }
  std::span<const std::uint32_t> cells() const { return cell_; }
  std::span<const std::uint32_t> population() const { return population_; }

  /// Per-row mean of y over the row's cell.
  std::vector<double> expectation(std::span<const double> y) const;

  /// True when the row's cell meets the configured minimum population.
  bool counted(std::size_t row) const { return population_[cell_[row]] >= min_population_; }

private:
  Subset conditioning_;
  std::uint32_t min_population_;
  std::vector<std::uint32_t> cell_;
  std::vector<std::uint32_t> population_;
};

/// Slice partitions for a fixed matrix, built once and reused across outputs.
///
/// Holds the partitions for every D ⊆ A over the requested subsets A, so
/// repeated estimates on the same data (as in the identification loop) cost
/// O(n) per subset.
class SliceEstimator {
public:
  SliceEstimator(const DecisionMatrix& v, std::span<const Subset> subsets, const SliceConfig& config);

  /// f_A at every row; A must be one of the constructor's subsets (or a subset of one).
  HdmrTerm term(std::span<const double> y, Subset a) const;

  /// Population variance of f_A over rows in sufficiently populated cells of A.
  double raw_variance(std::span<const double> y, Subset a) const;

private:
  const SlicePartition& partition(Subset d) const;

  std::vector<SlicePartition> partitions_;
};

/// Per-row slice estimate of E[Y | Z_D]; |D| <= 2.
std::vector<double> conditional_expectation(std::span<const double> y, const DecisionMatrix& v, Subset d,
                                            const SliceConfig& config);

/// f_A = Σ_{D⊆A} (-1)^{|A\D|} E[Y | Z_D] by inclusion-exclusion; |A| <= 2.
HdmrTerm hdmr_term(std::span<const double> y, const DecisionMatrix& v, Subset a, const SliceConfig& config);

enum class Estimator { EmpiricalSlices, AnalyticBanzhaf };

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& text);

struct SobolReport {
  Subset subset = 0;
  double raw_variance = 0.0;  ///< Var[f_A], in squared output units
  double normalized = 0.0;    ///< raw / Var[Y]; NaN when Var[Y] = 0
  Estimator estimator = Estimator::EmpiricalSlices;
  std::size_t sample_size = 0;
};

/// Population variance (divide by count).
double population_variance(std::span<const double> x);

/// Empirical Sobol' index of subset A (|A| in {1, 2}) from the slice estimator.
///
/// With `normalize` set, a zero output variance is an error; otherwise the
/// normalized field is NaN in that case.
SobolReport sobol_empirical(std::span<const double> y, const DecisionMatrix& v, Subset a,
                            const SliceConfig& config, bool normalize = false);

/// First-order index S_j = Var[E[Y | Z_j]] (optionally / Var[Y]); j is 1-based.
SobolReport first_order_empirical(std::span<const double> y, const DecisionMatrix& v, int j,
                                  const SliceConfig& config, bool normalize = false);

/// Var[(F_ML)_A] = I^B(A)^2 / 12^{|A|}: the exact Sobol' index of the
/// multilinear model under independent uniform inputs. A must be nonempty.
double analytic_sobol(const InteractionVector& ib, Subset a);

/// Σ_{A≠∅} analytic_sobol(ib, A): Var[F_ML] under independent uniform inputs.
double analytic_total_variance(const InteractionVector& ib);

SobolReport analytic_report(const InteractionVector& ib, Subset a);

}  // namespace sobolcap
