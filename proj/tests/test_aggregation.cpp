#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sobolcap/aggregation.hpp"

using namespace sobolcap;

namespace {

DecisionMatrix students() {
  return DecisionMatrix(3, 3, {1.00, 0.94, 0.67, 0.67, 0.72, 0.94, 0.83, 0.89, 0.83});
}

Capacity illustrative_mu() {
  const double v[] = {0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.4, 2.0 / 3, 2.0 / 3, 1};
  return Capacity::from_display_order(CriteriaIndex(3), v);
}

DecisionMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(n * m);
  for (auto& x : values) x = u(rng);
  return DecisionMatrix(n, m, std::move(values));
}

}  // namespace

TEST_CASE("WAM on the students example") {
  const auto r = wam(students(), WeightVector::equal(3));
  CHECK(std::abs(r[0] - 0.8700) <= 5e-4);
  CHECK(std::abs(r[1] - 0.7767) <= 5e-4);
  CHECK(std::abs(r[2] - 0.8500) <= 5e-4);
  CHECK(rank(r).positions == std::vector<std::size_t>{1, 3, 2});
}

TEST_CASE("WAM is idempotent") {
  const DecisionMatrix flat(2, 3, std::vector<double>(6, 0.37));
  for (double r : wam(flat, WeightVector({0.2, 0.5, 0.3}))) CHECK(r == doctest::Approx(0.37));
}

TEST_CASE("multilinear model on the students example") {
  const auto r = multilinear(students(), illustrative_mu());
  // Exact values for μ({1,3}) = μ({2,3}) = 2/3, from the literal-product oracle.
  CHECK(r[0] == doctest::Approx(0.78728).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.7689482666666667).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(0.8165122666666667).epsilon(1e-12));
  CHECK(rank(r).positions == std::vector<std::size_t>{2, 3, 1});

  // The published column (0.7874, 0.7703, 0.8172) corresponds to 2/3 rounded to 0.67.
  const double rounded[] = {0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.4, 0.67, 0.67, 1};
  const auto published = multilinear(students(), Capacity::from_display_order(CriteriaIndex(3), rounded));
  CHECK(std::abs(published[0] - 0.7874) <= 5e-4);
  CHECK(std::abs(published[1] - 0.7703) <= 5e-4);
  CHECK(std::abs(published[2] - 0.8172) <= 5e-4);
}

TEST_CASE("learned capacity puts student 3 first") {
  const double learned[] = {0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.4190, 0.7778, 0.8033, 1};
  const auto r = multilinear(students(), Capacity::from_display_order(CriteriaIndex(3), learned));
  CHECK(std::abs(r[0] - 0.7976) <= 5e-4);
  CHECK(std::abs(r[1] - 0.8196) <= 5e-4);
  CHECK(std::abs(r[2] - 0.8445) <= 5e-4);
  const auto ranking = rank(r);
  CHECK(ranking.order.front() == 2);
}

TEST_CASE("multilinear interpolates the capacity at hypercube vertices") {
  std::mt19937_64 rng(9);
  const auto mu = oracle::random_capacity(rng, 4);
  std::vector<double> values;
  for (Subset a = 0; a < 16; ++a) {
    for (int j = 0; j < 4; ++j) values.push_back((a >> j & 1u) ? 1.0 : 0.0);
  }
  const auto r = multilinear(DecisionMatrix(16, 4, values), mu);
  for (Subset a = 0; a < 16; ++a) CHECK(r[a] == doctest::Approx(mu[a]).epsilon(1e-14));
}

TEST_CASE("additive capacity reproduces WAM") {
  std::mt19937_64 rng(4);
  const auto v = random_matrix(rng, 200, 4);
  const WeightVector w({0.1, 0.4, 0.3, 0.2});
  const auto ml = multilinear_full(v, additive_capacity(w.values()));
  const auto ref = wam(v, w);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(ml[i] - ref[i]) <= 1e-12);
}

TEST_CASE("full and pairwise evaluation paths agree on 2-additive capacities") {
  std::mt19937_64 rng(21);
  for (int m = 2; m <= 6; ++m) {
    const auto mu = oracle::random_two_additive(rng, m);
    const auto v = random_matrix(rng, 50, static_cast<std::size_t>(m));
    const auto full = multilinear_full(v, mu);
    const auto fast = multilinear_pairwise(v, banzhaf_from_capacity(mu));
    for (std::size_t i = 0; i < full.size(); ++i) {
      CHECK(std::abs(full[i] - fast[i]) <= 1e-12);
      const auto row = v.row(i);
      CHECK(std::abs(full[i] - oracle::multilinear(oracle::values(mu), m, {row.begin(), row.end()})) <= 1e-12);
    }
  }
}

TEST_CASE("multilinear output is monotone in each evaluation and stays in [0,1]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = oracle::random_capacity(rng, 4);
    std::vector<double> x(4);
    for (auto& e : x) e = u(rng);
    const int j = trial % 4;
    auto raised = x;
    raised[j] = x[j] + (1.0 - x[j]) * u(rng);
    std::vector<double> both = x;
    both.insert(both.end(), raised.begin(), raised.end());
    const auto r = multilinear(DecisionMatrix(2, 4, both), mu);
    CHECK(r[1] >= r[0] - 1e-14);
    CHECK(r[0] >= -1e-14);
    CHECK(r[0] <= 1.0 + 1e-14);
  }
}

TEST_CASE("ranking ties share the best position") {
  const double tied[] = {0.5, 0.5};
  const auto r = rank(tied);
  CHECK(r.positions == std::vector<std::size_t>{1, 1});
  CHECK(r.order == std::vector<std::size_t>{0, 1});
  const double mixed[] = {0.2, 0.9, 0.2, 0.5};
  const auto m = rank(mixed);
  CHECK(m.positions == std::vector<std::size_t>{3, 1, 3, 2});
  CHECK(m.order == std::vector<std::size_t>{1, 3, 0, 2});
  const double single[] = {0.1};
  CHECK(rank(single).positions == std::vector<std::size_t>{1});
  const double bad[] = {0.1, std::nan("")};
  CHECK_THROWS_AS(rank(bad), DomainError);
}

TEST_CASE("matrix and weight validation") {
  try {
    DecisionMatrix(2, 2, {0.1, 0.2, 1.3, 0.4});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("row 2, column 1") != std::string::npos);
  }
  CHECK_THROWS_AS(DecisionMatrix(0, 3, {}), DimensionError);
  CHECK_THROWS_AS(DecisionMatrix(1, 1, {0.5}), DimensionError);
  CHECK_THROWS_AS(DecisionMatrix(2, 2, {0.5, 0.5, 0.5}), DimensionError);
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(WeightVector({-0.5, 1.5}), DomainError);
  CHECK_THROWS_AS(wam(students(), WeightVector({0.5, 0.5})), DimensionError);
  const double two[] = {0, 0.5, 0.5, 1};
  CHECK_THROWS_AS(multilinear(students(), Capacity::from_display_order(CriteriaIndex(2), two)), DimensionError);
}
