#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sobolcap/aggregation.hpp"

namespace sobolcap {

/// Target Pearson correlation between criteria j and k on the uniform scale.
struct PairTarget {
  int j = 1;
  int k = 2;
  double rho = 0.0;
};

struct GenSpec {
  std::size_t n = 0;
  int m = 0;
  std::vector<PairTarget> targets;
  std::uint64_t seed = 0;

  /// Throws SpecError naming the violated bound.
  void check() const;
};

/// Latent Gaussian correlation that yields Pearson ρ_u between the uniforms
/// Φ(Z_j), Φ(Z_k): ρ_g = 2 sin(π ρ_u / 6).
double latent_correlation(double uniform_rho);

/// Uniform [0,1] marginals coupled through a Gaussian copula.
///
/// Untargeted pairs are independent. The same spec always yields the same
/// matrix. Throws SpecError when the latent correlation matrix is not
/// positive definite.
DecisionMatrix generate(const GenSpec& spec);

/// Sample Pearson correlation. Throws ArgumentError on length mismatch or
/// n < 2, NumericalError when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace sobolcap
