#include "sobolcap/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sobolcap {

namespace {

void check_order(Subset s) {
  if (cardinality(s) > 2) {
    throw ArgumentError("slice estimator supports subsets of at most 2 criteria, got {" + format_subset(s) + "}");
  }
}

void check_rows(std::span<const double> y, const DecisionMatrix& v) {
  if (y.size() != v.rows()) {
    throw DimensionError("output has " + std::to_string(y.size()) + " values but the matrix has " +
                         std::to_string(v.rows()) + " rows");
  }
}

void check_subset(Subset s, const DecisionMatrix& v) {
  if ((s >> v.criteria()) != 0) {
    throw ArgumentError("subset {" + format_subset(s) + "} names criteria beyond " + std::to_string(v.criteria()));
  }
}

}  // namespace

void SliceConfig::check() const {
  if (slice_count < 2) {
    throw ArgumentError("slice count must be at least 2, got " + std::to_string(slice_count));
  }
  if (min_slice_population < 1) {
    throw ArgumentError("minimum slice population must be at least 1, got " + std::to_string(min_slice_population));
  }
}

bool SliceConfig::adequate_for(std::size_t rows) const {
  return rows >= 10 * static_cast<std::size_t>(slice_count);
}

SlicePartition::SlicePartition(const DecisionMatrix& v, Subset conditioning, const SliceConfig& config)
    : conditioning_(conditioning), min_population_(static_cast<std::uint32_t>(config.min_slice_population)) {
  config.check();
  check_order(conditioning);
  check_subset(conditioning, v);
  const auto slices = static_cast<std::uint32_t>(config.slice_count);
  const auto conditioned = members(conditioning);
  std::uint32_t cells = 1;
  for (std::size_t k = 0; k < conditioned.size(); ++k) {
    cells *= slices;
  }
  cell_.assign(v.rows(), 0);
  population_.assign(cells, 0);
  for (std::size_t i = 0; i < v.rows(); ++i) {
    std::uint32_t cell = 0;
    for (int j : conditioned) {
      const double x = v(i, static_cast<std::size_t>(j - 1));
      const auto slice = std::min(static_cast<std::uint32_t>(x * slices), slices - 1);
      cell = cell * slices + slice;
    }
    cell_[i] = cell;
    ++population_[cell];
  }
}

std::vector<double> SlicePartition::expectation(std::span<const double> y) const {
  if (y.size() != cell_.size()) {
    throw DimensionError("output has " + std::to_string(y.size()) + " values but the partition has " +
                         std::to_string(cell_.size()) + " rows");
  }
  const double shift = y.empty() ? 0.0 : y.front();
  std::vector<double> sums(population_.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    sums[cell_[i]] += y[i] - shift;
  }
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = shift + sums[cell_[i]] / population_[cell_[i]];
  }
  return out;
}

std::vector<double> conditional_expectation(std::span<const double> y, const DecisionMatrix& v, Subset d,
                                            const SliceConfig& config) {
  check_rows(y, v);
  return SlicePartition(v, d, config).expectation(y);
}

SliceEstimator::SliceEstimator(const DecisionMatrix& v, std::span<const Subset> subsets,
                               const SliceConfig& config) {
  config.check();
  std::vector<Subset> needed;
  for (Subset a : subsets) {
    check_order(a);
    check_subset(a, v);
    Subset d = a;
    while (true) {
      if (std::find(needed.begin(), needed.end(), d) == needed.end()) {
        needed.push_back(d);
      }
      if (d == 0) {
        break;
      }
      d = (d - 1) & a;
    }
  }
  std::sort(needed.begin(), needed.end());
  partitions_.reserve(needed.size());
  for (Subset d : needed) {
    partitions_.emplace_back(v, d, config);
  }
}

const SlicePartition& SliceEstimator::partition(Subset d) const {
  const auto it = std::lower_bound(partitions_.begin(), partitions_.end(), d,
                                   [](const SlicePartition& p, Subset s) { return p.conditioning() < s; });
  if (it == partitions_.end() || it->conditioning() != d) {
    throw ArgumentError("no slice partition prepared for {" + format_subset(d) + "}");
  }
  return *it;
}

HdmrTerm SliceEstimator::term(std::span<const double> y, Subset a) const {
  HdmrTerm out{a, std::vector<double>(y.size(), 0.0)};
  // Enumerate D ⊆ A, including D = A and D = ∅.
  Subset d = a;
  while (true) {
    const double sign = (cardinality(a & ~d) % 2 == 0) ? 1.0 : -1.0;
    const auto e = partition(d).expectation(y);
    for (std::size_t i = 0; i < e.size(); ++i) {
      out.values[i] += sign * e[i];
    }
    if (d == 0) {
      break;
    }
    d = (d - 1) & a;
  }
  return out;
}

double SliceEstimator::raw_variance(std::span<const double> y, Subset a) const {
  const auto f = term(y, a);
  const auto& cells = partition(a);
  std::vector<double> kept;
  kept.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (cells.counted(i)) {
      kept.push_back(f.values[i]);
    }
  }
  return std::max(0.0, population_variance(kept));
}

HdmrTerm hdmr_term(std::span<const double> y, const DecisionMatrix& v, Subset a, const SliceConfig& config) {
  check_rows(y, v);
  const Subset subsets[] = {a};
  return SliceEstimator(v, subsets, config).term(y, a);
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::EmpiricalSlices:
      return "empirical-slices";
    case Estimator::AnalyticBanzhaf:
      return "analytic-banzhaf";
  }
  return "unknown";
}

Estimator estimator_from_string(const std::string& text) {
  if (text == "empirical-slices") {
    return Estimator::EmpiricalSlices;
  }
  if (text == "analytic-banzhaf") {
    return Estimator::AnalyticBanzhaf;
  }
  throw ParseError("unknown estimator tag '" + text + "'");
}

double population_variance(std::span<const double> x) {
  if (x.empty()) {
    return 0.0;
  }
  // Shifted by the first value so a constant sample gives exactly zero.
  const double shift = x.front();
  double mean = 0.0;
  for (double value : x) {
    mean += value - shift;
  }
  mean /= static_cast<double>(x.size());
  double acc = 0.0;
  for (double value : x) {
    const double d = value - shift - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

SobolReport sobol_empirical(std::span<const double> y, const DecisionMatrix& v, Subset a, const SliceConfig& config,
                            bool normalize) {
  check_rows(y, v);
  if (a == 0) {
    throw ArgumentError("Sobol' index of the empty set is undefined");
  }
  const Subset subsets[] = {a};
  const SliceEstimator estimator(v, subsets, config);
  SobolReport report;
  report.subset = a;
  report.raw_variance = estimator.raw_variance(y, a);
  report.estimator = Estimator::EmpiricalSlices;
  report.sample_size = y.size();
  const double total = population_variance(y);
  if (total > 0.0) {
    report.normalized = report.raw_variance / total;
  } else if (normalize) {
    throw NumericalError("output variance is zero; normalized Sobol' index is undefined");
  } else {
    report.normalized = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

SobolReport first_order_empirical(std::span<const double> y, const DecisionMatrix& v, int j,
                                  const SliceConfig& config, bool normalize) {
  CriteriaIndex(static_cast<int>(v.criteria())).check_criterion(j);
  return sobol_empirical(y, v, singleton(j), config, normalize);
}

double analytic_sobol(const InteractionVector& ib, Subset a) {
  if (a == 0) {
    throw ArgumentError("analytic Sobol' index of the empty set is undefined");
  }
  if (a > ib.index().full()) {
    throw ArgumentError("subset {" + format_subset(a) + "} names criteria beyond " + std::to_string(ib.criteria()));
  }
  const double value = ib[a];
  return value * value / std::pow(12.0, cardinality(a));
}

double analytic_total_variance(const InteractionVector& ib) {
  double total = 0.0;
  for (Subset a = 1; a <= ib.index().full(); ++a) {
    total += analytic_sobol(ib, a);
  }
  return total;
}

SobolReport analytic_report(const InteractionVector& ib, Subset a) {
  SobolReport report;
  report.subset = a;
  report.raw_variance = analytic_sobol(ib, a);
  const double total = analytic_total_variance(ib);
  report.normalized = total > 0.0 ? report.raw_variance / total : std::numeric_limits<double>::quiet_NaN();
  report.estimator = Estimator::AnalyticBanzhaf;
  report.sample_size = 0;
  return report;
}

}  // namespace sobolcap
