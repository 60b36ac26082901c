#include "sobolcap/capacity.hpp"

#include <cmath>
#include <sstream>

namespace sobolcap {

namespace {

/// Applies a 2x2 linear map to every (A, A ∪ {j}) pair, one bit at a time.
/// Every transform between the coordinate systems here is a tensor power
/// of such a map, so m passes give the full transform.
template <class Map>
std::vector<double> per_bit(std::span<const double> in, int m, Map map) {
  std::vector<double> out(in.begin(), in.end());
  const std::size_t n = out.size();
  for (int bit = 0; bit < m; ++bit) {
    const std::size_t step = std::size_t{1} << bit;
    for (std::size_t s = 0; s < n; ++s) {
      if ((s & step) == 0) {
        double& without = out[s];
        double& with = out[s | step];
        map(without, with);
      }
    }
  }
  return out;
}

}  // namespace

Capacity additive_capacity(std::span<const double> weights) {
  const CriteriaIndex index(static_cast<int>(weights.size()));
  std::vector<double> values(index.subset_count(), 0.0);
  for (Subset s = 1; s < values.size(); ++s) {
    const int low = std::countr_zero(s);
    values[s] = values[s & (s - 1)] + weights[low];
  }
  return Capacity(index, std::move(values));
}

InteractionVector banzhaf_from_capacity(const Capacity& mu) {
  // Per bit: I(A) = (μ(A) + μ(A∪j)) / 2, I(A∪j) = μ(A∪j) - μ(A).
  auto values = per_bit(mu.values(), mu.criteria(), [](double& a, double& b) {
    const double mean = 0.5 * (a + b);
    const double diff = b - a;
    a = mean;
    b = diff;
  });
  return InteractionVector(mu.index(), std::move(values));
}

Capacity capacity_from_banzhaf(const InteractionVector& ib) {
  auto values = per_bit(ib.values(), ib.criteria(), [](double& a, double& b) {
    const double lo = a - 0.5 * b;
    const double hi = a + 0.5 * b;
    a = lo;
    b = hi;
  });
  return Capacity(ib.index(), std::move(values));
}

FourierVector fourier_from_banzhaf(const InteractionVector& ib) {
  std::vector<double> values(ib.values().begin(), ib.values().end());
  for (Subset s = 0; s < values.size(); ++s) {
    values[s] *= std::pow(-0.5, cardinality(s));
  }
  return FourierVector(ib.index(), std::move(values));
}

MobiusVector mobius_from_capacity(const Capacity& mu) {
  auto values = per_bit(mu.values(), mu.criteria(), [](double& a, double& b) { b -= a; });
  return MobiusVector(mu.index(), std::move(values));
}

Capacity capacity_from_mobius(const MobiusVector& mass) {
  auto values = per_bit(mass.values(), mass.criteria(), [](double& a, double& b) { b += a; });
  return Capacity(mass.index(), std::move(values));
}

double power_index(const Capacity& mu, int j) {
  mu.index().check_criterion(j);
  const Subset bit = singleton(j);
  double sum = 0.0;
  for (Subset d = 0; d <= mu.index().full(); ++d) {
    if ((d & bit) == 0) {
      sum += mu[d | bit] - mu[d];
    }
  }
  return sum / std::ldexp(1.0, mu.criteria() - 1);
}

double pair_interaction(const Capacity& mu, int j, int k) {
  mu.index().check_criterion(j);
  mu.index().check_criterion(k);
  if (j == k) {
    throw ArgumentError("pair interaction needs two distinct criteria, got " + std::to_string(j) +
                        " twice");
  }
  const Subset a = singleton(j);
  const Subset b = singleton(k);
  double sum = 0.0;
  for (Subset d = 0; d <= mu.index().full(); ++d) {
    if ((d & (a | b)) == 0) {
      sum += mu[d | a | b] - mu[d | a] - mu[d | b] + mu[d];
    }
  }
  return sum / std::ldexp(1.0, mu.criteria() - 2);
}

std::string ValidationReport::describe() const {
  if (ok()) {
    return "valid capacity";
  }
  std::ostringstream out;
  if (!bounded) {
    out << "boundedness violated (need mu(empty)=0 and mu(C)=1)";
  }
  for (const auto& v : violations) {
    if (out.tellp() > 0) {
      out << "; ";
    }
    out << "monotonicity violated: mu({" << format_subset(v.lower) << "}) exceeds mu({"
        << format_subset(v.upper) << "}) by " << v.drop;
  }
  return out.str();
}

ValidationReport validate(const Capacity& mu, double tolerance) {
  ValidationReport report;
  const Subset full = mu.index().full();
  report.bounded = std::abs(mu[0]) <= tolerance && std::abs(mu[full] - 1.0) <= tolerance;
  for (Subset a = 0; a <= full; ++a) {
    for (int j = 1; j <= mu.criteria(); ++j) {
      const Subset upper = a | singleton(j);
      if (upper == a) {
        continue;
      }
      const double drop = mu[a] - mu[upper];
      if (!(drop <= tolerance)) {
        report.violations.push_back({a, upper, drop});
      }
    }
  }
  return report;
}

bool is_two_additive(const InteractionVector& ib, double tolerance) {
  for (Subset s = 0; s <= ib.index().full(); ++s) {
    if (cardinality(s) >= 3 && !(std::abs(ib[s]) <= tolerance)) {
      return false;
    }
  }
  return true;
}

std::vector<std::pair<int, int>> pair_list(int m) {
  std::vector<std::pair<int, int>> out;
  for (int j = 1; j <= m; ++j) {
    for (int k = j + 1; k <= m; ++k) {
      out.emplace_back(j, k);
    }
  }
  return out;
}

double TwoAdditiveCoordinates::pair_mass(std::size_t pair_slot) const {
  const auto pairs_idx = pair_list(criteria());
  const auto [j, k] = pairs_idx.at(pair_slot);
  return pairs[pair_slot] - singletons[j - 1] - singletons[k - 1];
}

Capacity TwoAdditiveCoordinates::to_capacity() const {
  const CriteriaIndex index(criteria());
  const auto pairs_idx = pair_list(criteria());
  if (pairs.size() != pairs_idx.size()) {
    throw DimensionError("2-additive coordinates on " + std::to_string(criteria()) +
                         " criteria need " + std::to_string(pairs_idx.size()) +
                         " pair values, got " + std::to_string(pairs.size()));
  }
  std::vector<double> values(index.subset_count(), 0.0);
  for (int j = 1; j <= criteria(); ++j) {
    values[singleton(j)] = singletons[j - 1];
  }
  for (std::size_t p = 0; p < pairs_idx.size(); ++p) {
    const auto [j, k] = pairs_idx[p];
    values[pair_of(j, k)] = pairs[p] - singletons[j - 1] - singletons[k - 1];
  }
  return capacity_from_mobius(MobiusVector(index, std::move(values)));
}

}  // namespace sobolcap
