#include "sobolcap/datagen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sobolcap {

void GenSpec::check() const {
  if (n < 1) {
    throw SpecError("n must be at least 1, got " + std::to_string(n));
  }
  if (m < 2 || m > kMaxCriteria) {
    throw SpecError("m must be in 2.." + std::to_string(kMaxCriteria) + ", got " + std::to_string(m));
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& target = targets[t];
    if (target.j < 1 || target.j > m || target.k < 1 || target.k > m || target.j == target.k) {
      throw SpecError("correlation target (" + std::to_string(target.j) + "," + std::to_string(target.k) +
                      ") must name two distinct criteria in 1.." + std::to_string(m));
    }
    if (!(std::abs(target.rho) < 1.0)) {
      throw SpecError("correlation target rho must satisfy |rho| < 1, got " + std::to_string(target.rho));
    }
    for (std::size_t u = 0; u < t; ++u) {
      const auto& other = targets[u];
      if (std::min(other.j, other.k) == std::min(target.j, target.k) &&
          std::max(other.j, other.k) == std::max(target.j, target.k)) {
        throw SpecError("correlation target for pair (" + std::to_string(target.j) + "," + std::to_string(target.k) +
                        ") given twice");
      }
    }
  }
}

double latent_correlation(double uniform_rho) {
  return 2.0 * std::sin(std::numbers::pi * uniform_rho / 6.0);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

DecisionMatrix generate(const GenSpec& spec) {
  spec.check();
  const auto m = static_cast<Eigen::Index>(spec.m);
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(m, m);
  for (const auto& target : spec.targets) {
    const double g = latent_correlation(target.rho);
    corr(target.j - 1, target.k - 1) = g;
    corr(target.k - 1, target.j - 1) = g;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() != Eigen::Success) {
    throw SpecError("correlation targets do not form a positive definite correlation structure");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(spec.n * static_cast<std::size_t>(spec.m));
  Eigen::VectorXd eps(m);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      eps(j) = normal(rng);
    }
    const Eigen::VectorXd z = lower * eps;
    for (Eigen::Index j = 0; j < m; ++j) {
      values[i * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] = normal_cdf(z(j));
    }
  }
  return DecisionMatrix(spec.n, static_cast<std::size_t>(spec.m), std::move(values));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ArgumentError("pearson: lengths differ (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                        ")");
  }
  if (x.size() < 2) {
    throw ArgumentError("pearson: need at least 2 observations");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw NumericalError("pearson: correlation undefined for a constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace sobolcap
