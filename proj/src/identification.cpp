#include "sobolcap/identification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sobolcap/golden_section.hpp"

namespace sobolcap {

namespace {

constexpr double kFeasibilityTolerance = 1e-12;

void check_singleton_value(int m, double s) {
  if (!(s > 0.0) || s > 2.0 / m + kFeasibilityTolerance) {
    throw ConfigError("singleton value " + std::to_string(s) + " admits no monotone 2-additive capacity on " +
                      std::to_string(m) + " criteria (need 0 < s <= 2/m = " + std::to_string(2.0 / m) + ")");
  }
}

/// Recomputes the balancing pair from the constraint so that rounding never accumulates.
void rebalance(TwoAdditiveCoordinates& coords, std::size_t balancing, double pair_sum) {
  double others = 0.0;
  for (std::size_t p = 0; p < coords.pairs.size(); ++p) {
    if (p != balancing) {
      others += coords.pairs[p];
    }
  }
  coords.pairs[balancing] = pair_sum - others;
}

/// Draws an ordered pair of distinct slots uniformly.
std::pair<std::size_t, std::size_t> draw_roles(std::mt19937_64& rng, std::size_t slots) {
  std::uniform_int_distribution<std::size_t> first(0, slots - 1);
  std::uniform_int_distribution<std::size_t> second(0, slots - 2);
  const std::size_t moving = first(rng);
  std::size_t balancing = second(rng);
  if (balancing >= moving) {
    ++balancing;
  }
  return {moving, balancing};
}

struct Descent {
  TwoAdditiveCoordinates coords;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

Descent descend(TwoAdditiveCoordinates start, const SobolBalanceObjective& objective_fn,
                const IdentificationConfig& config, double pair_sum, std::mt19937_64& rng) {
  Descent run{std::move(start), {}, 0, false};
  const std::size_t slots = run.coords.pairs.size();
  double current = objective_fn(run.coords.to_capacity());
  run.trace.push_back(current);
  const int window = 3 * static_cast<int>(slots);
  int stagnant = 0;

  for (int it = 1; it <= config.max_outer_iterations; ++it) {
    run.iterations = it;
    const auto [moving, balancing] = draw_roles(rng, slots);
    const Interval range = feasible_interval(run.coords, moving, balancing);
    const double previous = current;

    if (range.width() > 0.0) {
      auto along = [&](double x) {
        TwoAdditiveCoordinates trial = run.coords;
        trial.pairs[moving] = x;
        rebalance(trial, balancing, pair_sum);
        return objective_fn(trial.to_capacity());
      };
      const LineMinimum best = golden_section_minimize(along, range.lo, range.hi, config.gs_tolerance);
      if (best.value < current) {
        run.coords.pairs[moving] = best.x;
        rebalance(run.coords, balancing, pair_sum);
        current = best.value;
#ifndef NDEBUG
        const auto report = validate(run.coords.to_capacity());
        if (!report.ok()) {
          throw NumericalError("optimizer left the feasible region: " + report.describe());
        }
#endif
      }
    }
    run.trace.push_back(current);

    if (previous - current < config.objective_tolerance) {
      if (++stagnant >= window) {
        run.converged = true;
        break;
      }
    } else {
      stagnant = 0;
    }
  }
  return run;
}

/// A random feasible start: a few uniform moves away from the symmetric point.
TwoAdditiveCoordinates scattered_start(int m, double s, double pair_sum, std::mt19937_64& rng) {
  auto coords = symmetric_start(m, s);
  const std::size_t slots = coords.pairs.size();
  for (std::size_t step = 0; step < 2 * slots; ++step) {
    const auto [moving, balancing] = draw_roles(rng, slots);
    const Interval range = feasible_interval(coords, moving, balancing);
    std::uniform_real_distribution<double> pick(range.lo, std::max(range.lo, range.hi));
    coords.pairs[moving] = range.width() > 0.0 ? pick(rng) : range.lo;
    rebalance(coords, balancing, pair_sum);
  }
  return coords;
}

}  // namespace

void IdentificationConfig::check(int m) const {
  slices.check();
  if (!(gs_tolerance > 0.0)) {
    throw ArgumentError("golden-section tolerance must be positive");
  }
  if (!(objective_tolerance >= 0.0)) {
    throw ArgumentError("objective tolerance must be nonnegative");
  }
  if (max_outer_iterations < 0) {
    throw ArgumentError("max outer iterations must be nonnegative");
  }
  if (starts < 1) {
    throw ArgumentError("need at least one start");
  }
  if (objective_orders.empty()) {
    throw ArgumentError("objective needs at least one subset cardinality");
  }
  for (int k : objective_orders) {
    if (k < 1 || k > 2 || k >= m) {
      throw ArgumentError("objective order " + std::to_string(k) + " unsupported on " + std::to_string(m) +
                          " criteria (the slice estimator handles orders 1 and 2 of proper subsets)");
    }
  }
}

PairSumConstraint pair_constraint_targets(int m, double singleton_value) {
  if (m < 2) {
    throw ArgumentError("pair constraint needs at least 2 criteria, got " + std::to_string(m));
  }
  PairSumConstraint out;
  out.pair_mass_sum = 1.0 - m * singleton_value;
  out.pair_capacity_sum = static_cast<double>(m) * (m - 2) * singleton_value + 1.0;
  return out;
}

TwoAdditiveCoordinates symmetric_start(int m, double singleton_value) {
  const auto slots = static_cast<double>(m) * (m - 1) / 2.0;
  const double mass = pair_constraint_targets(m, singleton_value).pair_mass_sum / slots;
  TwoAdditiveCoordinates coords;
  coords.singletons.assign(static_cast<std::size_t>(m), singleton_value);
  coords.pairs.assign(static_cast<std::size_t>(slots), 2.0 * singleton_value + mass);
  return coords;
}

Interval feasible_interval(const TwoAdditiveCoordinates& current, std::size_t moving, std::size_t balancing) {
  const int m = current.criteria();
  const auto pairs = pair_list(m);
  if (current.pairs.size() != pairs.size()) {
    throw DimensionError("expected " + std::to_string(pairs.size()) + " pair coordinates, got " +
                         std::to_string(current.pairs.size()));
  }
  if (moving >= pairs.size() || balancing >= pairs.size()) {
    throw ArgumentError("pair slot out of range");
  }
  if (moving == balancing) {
    throw ArgumentError("moving and balancing pair must differ");
  }
  const auto [ma, mb] = pairs[moving];
  const auto [ba, bb] = pairs[balancing];
  const double moving_base = current.singletons[ma - 1] + current.singletons[mb - 1];
  std::vector<double> masses(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    masses[p] = current.pairs[p] - current.singletons[pairs[p].first - 1] - current.singletons[pairs[p].second - 1];
  }
  const double total = masses[moving] + masses[balancing];

  // With x the moving pair's mass and total - x the balancing one's, criterion j
  // needs slack_j + [j in moving] min(0, x) + [j in balancing] min(0, total - x) >= 0,
  // where slack_j = μ({j}) + Σ over the other pairs touching j of min(0, mass).
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= m; ++j) {
    double slack = current.singletons[j - 1];
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (p == moving || p == balancing) {
        continue;
      }
      if (pairs[p].first == j || pairs[p].second == j) {
        slack += std::min(0.0, masses[p]);
      }
    }
    const bool in_moving = (ma == j || mb == j);
    const bool in_balancing = (ba == j || bb == j);
    if (slack < -kFeasibilityTolerance) {
      throw NumericalError("current capacity is not monotone at criterion " + std::to_string(j));
    }
    if (in_moving) {
      lo = std::max(lo, -slack);
    }
    if (in_balancing) {
      hi = std::min(hi, total + slack);
    }
    if (in_moving && in_balancing && total < -slack - kFeasibilityTolerance) {
      throw NumericalError("current capacity is not monotone at criterion " + std::to_string(j));
    }
  }
  if (masses[moving] < lo - kFeasibilityTolerance || masses[moving] > hi + kFeasibilityTolerance) {
    throw NumericalError("current capacity is not monotone along the moving pair");
  }
  if (lo > hi) {
    if (lo - hi > kFeasibilityTolerance) {
      throw NumericalError("current capacity admits no feasible move for this pair");
    }
    lo = hi = 0.5 * (lo + hi);
  }
  return {moving_base + lo, moving_base + hi};
}

namespace {

std::vector<Subset> estimator_subsets(const DecisionMatrix& v, const IdentificationConfig& config) {
  config.check(static_cast<int>(v.criteria()));
  const CriteriaIndex index(static_cast<int>(v.criteria()));
  // Singletons are always prepared for reporting sobol_before/after.
  std::vector<Subset> all = index.of_cardinality(1);
  if (std::find(config.objective_orders.begin(), config.objective_orders.end(), 2) != config.objective_orders.end()) {
    const auto pairs = index.of_cardinality(2);
    all.insert(all.end(), pairs.begin(), pairs.end());
  }
  return all;
}

}  // namespace

SobolBalanceObjective::SobolBalanceObjective(const DecisionMatrix& v, const IdentificationConfig& config)
    : v_(v), normalized_(config.normalized), estimator_(v, estimator_subsets(v, config), config.slices) {
  const CriteriaIndex index(static_cast<int>(v.criteria()));
  for (int k : config.objective_orders) {
    levels_.push_back(index.of_cardinality(k));
  }
}

std::vector<double> SobolBalanceObjective::indices(std::span<const double> y, std::span<const Subset> subsets) const {
  std::vector<double> out;
  out.reserve(subsets.size());
  const double total = normalized_ ? population_variance(y) : 1.0;
  if (normalized_ && !(total > 0.0)) {
    throw NumericalError("output variance is zero; normalized Sobol' indices are undefined");
  }
  for (Subset a : subsets) {
    out.push_back(estimator_.raw_variance(y, a) / total);
  }
  return out;
}

double SobolBalanceObjective::operator()(const Capacity& mu) const {
  const auto y = multilinear(v_, mu);
  double sum = 0.0;
  for (const auto& level : levels_) {
    const auto s = indices(y, level);
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t d = a + 1; d < s.size(); ++d) {
        sum += (s[a] - s[d]) * (s[a] - s[d]);
      }
    }
  }
  return sum;
}

std::vector<double> SobolBalanceObjective::first_order(const Capacity& mu) const {
  const auto y = multilinear(v_, mu);
  const auto singles = CriteriaIndex(static_cast<int>(v_.criteria())).of_cardinality(1);
  std::vector<double> out;
  for (Subset a : singles) {
    out.push_back(estimator_.raw_variance(y, a));
  }
  return out;
}

double objective(const Capacity& mu, const DecisionMatrix& v, const IdentificationConfig& config) {
  return SobolBalanceObjective(v, config)(mu);
}

IdentificationResult identify(const DecisionMatrix& v, const IdentificationConfig& config) {
  const int m = static_cast<int>(v.criteria());
  const double s = config.singleton_for(m);
  check_singleton_value(m, s);
  config.check(m);
  const double pair_sum = pair_constraint_targets(m, s).pair_capacity_sum;
  const SobolBalanceObjective objective_fn(v, config);

  const auto start = symmetric_start(m, s);
  const Capacity start_capacity = start.to_capacity();
  std::mt19937_64 rng(config.rng_seed);

  Descent best;
  int best_start = 0;
  if (start.pairs.size() < 2) {
    // m = 2: the single pair capacity is pinned by μ(C) = 1.
    best = Descent{start, {objective_fn(start_capacity)}, 0, true};
  } else {
    for (int k = 0; k < config.starts; ++k) {
      auto origin = (k == 0) ? start : scattered_start(m, s, pair_sum, rng);
      auto run = descend(std::move(origin), objective_fn, config, pair_sum, rng);
      if (k == 0 || run.trace.back() < best.trace.back()) {
        best = std::move(run);
        best_start = k;
      }
    }
  }

  Capacity capacity = best.coords.to_capacity();
  const auto report = validate(capacity);
  if (!report.ok()) {
    throw NumericalError("identified capacity is invalid: " + report.describe());
  }
  IdentificationResult result{capacity,
                              banzhaf_from_capacity(capacity),
                              objective_fn.first_order(start_capacity),
                              objective_fn.first_order(capacity),
                              std::move(best.trace),
                              best.iterations,
                              best.converged,
                              best_start};
  return result;
}

}  // namespace sobolcap
