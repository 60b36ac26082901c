#include "sobolcap/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sobolcap {

namespace {

constexpr double kTwoAdditiveTolerance = 1e-13;

void check_shapes(const DecisionMatrix& v, std::size_t m, const char* what) {
  if (v.criteria() != m) {
    throw DimensionError(std::string(what) + " has " + std::to_string(m) + " criteria but the matrix has " +
                         std::to_string(v.criteria()));
  }
}

}  // namespace

DecisionMatrix::DecisionMatrix(std::size_t rows, std::size_t criteria, std::vector<double> values)
    : rows_(rows), criteria_(criteria), values_(std::move(values)) {
  if (rows_ < 1) {
    throw DimensionError("decision matrix needs at least one alternative");
  }
  if (criteria_ < 2 || criteria_ > static_cast<std::size_t>(kMaxCriteria)) {
    throw DimensionError("decision matrix needs 2.." + std::to_string(kMaxCriteria) + " criteria, got " +
                         std::to_string(criteria_));
  }
  if (values_.size() != rows_ * criteria_) {
    throw DimensionError("decision matrix of " + std::to_string(rows_) + "x" + std::to_string(criteria_) +
                         " got " + std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < criteria_; ++j) {
      const double x = values_[i * criteria_ + j];
      if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("evaluation at row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                          " is " + std::to_string(x) + ", outside [0,1]");
      }
    }
  }
  names_.reserve(criteria_);
  for (std::size_t j = 0; j < criteria_; ++j) {
    names_.push_back("c" + std::to_string(j + 1));
  }
}

std::vector<double> DecisionMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i] = (*this)(i, j);
  }
  return out;
}

void DecisionMatrix::set_criterion_names(std::vector<std::string> names) {
  if (names.size() != criteria_) {
    throw DimensionError("expected " + std::to_string(criteria_) + " criterion names, got " +
                         std::to_string(names.size()));
  }
  names_ = std::move(names);
}

void DecisionMatrix::set_labels(std::vector<std::string> labels) {
  if (labels.size() != rows_) {
    throw DimensionError("expected " + std::to_string(rows_) + " row labels, got " + std::to_string(labels.size()));
  }
  labels_ = std::move(labels);
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw DimensionError("weight vector is empty");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (!(weights_[j] >= 0.0)) {
      throw DomainError("weight " + std::to_string(j + 1) + " is negative");
    }
    sum += weights_[j];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("weights sum to " + std::to_string(sum) + ", not 1");
  }
}

WeightVector WeightVector::equal(std::size_t m) {
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

std::vector<double> wam(const DecisionMatrix& v, const WeightVector& w) {
  check_shapes(v, w.size(), "weight vector");
  std::vector<double> out(v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const auto row = v.row(i);
    out[i] = std::inner_product(row.begin(), row.end(), w.values().begin(), 0.0);
  }
  return out;
}

std::vector<double> multilinear_full(const DecisionMatrix& v, const Capacity& mu) {
  check_shapes(v, static_cast<std::size_t>(mu.criteria()), "capacity");
  const std::size_t subsets = mu.index().subset_count();
  std::vector<double> weight(subsets);
  std::vector<double> out(v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    // weight[A] = Π_{j∈A} v_j Π_{j∉A} (1 - v_j), built one criterion at a time.
    weight[0] = 1.0;
    for (std::size_t j = 0; j < v.criteria(); ++j) {
      const double x = v(i, j);
      const std::size_t filled = std::size_t{1} << j;
      for (std::size_t s = 0; s < filled; ++s) {
        weight[s | filled] = weight[s] * x;
        weight[s] *= 1.0 - x;
      }
    }
    double r = 0.0;
    for (std::size_t s = 0; s < subsets; ++s) {
      r += mu[static_cast<Subset>(s)] * weight[s];
    }
    out[i] = r;
  }
  return out;
}

std::vector<double> multilinear_pairwise(const DecisionMatrix& v, const InteractionVector& ib) {
  const auto m = static_cast<std::size_t>(ib.criteria());
  check_shapes(v, m, "interaction vector");
  const auto pairs = pair_list(ib.criteria());
  std::vector<double> centered(m);
  std::vector<double> out(v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    double r = ib[0];
    for (std::size_t j = 0; j < m; ++j) {
      centered[j] = v(i, j) - 0.5;
      r += ib[singleton(static_cast<int>(j) + 1)] * centered[j];
    }
    for (const auto& [j, k] : pairs) {
      r += ib[pair_of(j, k)] * centered[j - 1] * centered[k - 1];
    }
    out[i] = r;
  }
  return out;
}

std::vector<double> multilinear(const DecisionMatrix& v, const Capacity& mu) {
  check_shapes(v, static_cast<std::size_t>(mu.criteria()), "capacity");
  const auto ib = banzhaf_from_capacity(mu);
  if (is_two_additive(ib, kTwoAdditiveTolerance)) {
    return multilinear_pairwise(v, ib);
  }
  return multilinear_full(v, mu);
}

Ranking rank(std::span<const double> overall) {
  Ranking out;
  out.overall.assign(overall.begin(), overall.end());
  for (std::size_t i = 0; i < overall.size(); ++i) {
    if (std::isnan(overall[i])) {
      throw DomainError("overall evaluation of alternative " + std::to_string(i + 1) + " is NaN");
    }
  }
  out.order.resize(overall.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return overall[a] > overall[b]; });
  out.positions.resize(overall.size());
  for (std::size_t place = 0; place < out.order.size(); ++place) {
    const std::size_t alt = out.order[place];
    if (place > 0 && overall[out.order[place - 1]] == overall[alt]) {
      out.positions[alt] = out.positions[out.order[place - 1]];
    } else {
      out.positions[alt] = place + 1;
    }
  }
  return out;
}

}  // namespace sobolcap
