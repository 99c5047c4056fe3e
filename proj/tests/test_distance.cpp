#include <cmath>

#include "doctest.h"
#include "ivfs/distance.hpp"
#include "ivfs/error.hpp"
#include "ivfs/kernels.hpp"
#include "ivfs/rng.hpp"

using namespace ivfs;

namespace {

DataMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto rng = make_stream(seed, 0, 7);
  std::vector<double> v(n * d);
  for (auto& e : v) e = uniform_unit(rng) * 2.0 - 1.0;
  return DataMatrix(n, d, std::move(v));
}

DistanceMatrix random_distances(std::size_t n, std::uint64_t seed) {
  return distance_matrix(random_matrix(n, 3, seed));
}

}  // namespace

TEST_CASE("two points normalize to one") {
  const DataMatrix x(2, 2, {0.0, 0.0, 3.0, 4.0});
  const auto d = distance_matrix(x);
  CHECK(d(0, 1) == 1.0);
  CHECK(d(1, 0) == 1.0);
  CHECK(d(0, 0) == 0.0);
  CHECK(d.normalizer() == 5.0);
}

TEST_CASE("three collinear points") {
  const DataMatrix x(3, 1, {0.0, 1.0, 3.0});
  const auto d = distance_matrix(x);
  CHECK(d(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(d(0, 2) == 1.0);
  CHECK(d(1, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("identical points give the zero matrix") {
  const DataMatrix x(3, 2, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  const auto d = distance_matrix(x);
  CHECK(d.normalizer() == 0.0);
  for (double e : d.entries()) CHECK(e == 0.0);
}

TEST_CASE("row selection errors") {
  const auto x = random_matrix(4, 2, 1);
  CHECK_THROWS_AS(distance_matrix(x, Selection{std::vector<std::size_t>{1}, std::nullopt}), InvalidSelection);
  CHECK_THROWS_AS(distance_matrix(x, Selection{std::vector<std::size_t>{1, 1}, std::nullopt}), InvalidSelection);
  CHECK_THROWS_AS(distance_matrix(x, Selection{std::vector<std::size_t>{1, 9}, std::nullopt}), InvalidSelection);
}

TEST_CASE("matrix is symmetric with zero diagonal and entries in [0, 1]") {
  const auto d = random_distances(15, 2);
  double top = 0.0;
  for (std::size_t i = 0; i < 15; ++i) {
    CHECK(d(i, i) == 0.0);
    for (std::size_t j = 0; j < 15; ++j) {
      CHECK(d(i, j) == d(j, i));
      CHECK(d(i, j) >= 0.0);
      CHECK(d(i, j) <= 1.0);
      top = std::max(top, d(i, j));
    }
  }
  CHECK(top == 1.0);
}

TEST_CASE("from_entries validates its input") {
  CHECK_THROWS_AS(DistanceMatrix::from_entries(2, {0.0, 0.5, 0.4, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(DistanceMatrix::from_entries(2, {0.1, 0.5, 0.5, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(DistanceMatrix::from_entries(2, {0.0, 1.5, 1.5, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(DistanceMatrix::from_entries(2, {0.0, 0.5, 0.5}), ShapeError);
}

TEST_CASE("linf norm") {
  const auto a = random_distances(10, 3);
  CHECK(norm_linf(a, a) == 0.0);
  std::vector<double> e(a.entries().begin(), a.entries().end());
  const double shift = e[1] >= 0.5 ? -0.2 : 0.2;
  e[1] += shift;
  e[10] += shift;
  const auto b = DistanceMatrix::from_entries(10, e);
  CHECK(norm_linf(a, b) == doctest::Approx(0.2).epsilon(1e-12));

  const auto c = random_distances(10, 4);
  double brute = 0.0;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) brute = std::max(brute, std::abs(a(i, j) - c(i, j)));
  CHECK(norm_linf(a, c) == brute);
  CHECK_THROWS_AS(norm_linf(a, random_distances(9, 5)), ShapeError);
}

TEST_CASE("l1 and l2 norms") {
  const auto a = DistanceMatrix::from_entries(2, {0.0, 0.5, 0.5, 0.0});
  const auto b = DistanceMatrix::from_entries(2, {0.0, 0.4, 0.4, 0.0});
  CHECK(norm_l1(a, a) == 0.0);
  CHECK(norm_l2(a, a) == 0.0);
  CHECK(norm_l1(a, b) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(norm_l2(a, b) == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-12));

  const auto c = random_distances(12, 6);
  const auto e = random_distances(12, 7);
  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      const double t = c(i, j) - e(i, j);
      l1 += std::abs(t);
      l2 += t * t;
    }
  }
  CHECK(std::abs(norm_l1(c, e) - l1) < 1e-12);
  CHECK(std::abs(norm_l2(c, e) - std::sqrt(l2)) < 1e-12);
}

TEST_CASE("accumulator agrees with direct computation") {
  const auto x = random_matrix(12, 6, 8);
  const SquaredDistanceAccumulator acc(x);
  const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  const auto d = acc.accumulate(all);
  const auto ref = distance_matrix(x);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) CHECK(std::abs(d(i, j) - ref(i, j)) < 1e-9);

  const std::vector<std::size_t> one{4};
  const auto sq = acc.squared(one);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      const double diff = x(i, 4) - x(j, 4);
      CHECK(std::abs(std::sqrt(sq[i * 12 + j]) - std::abs(diff)) < 1e-12);
      CHECK(acc.contribution(4, i, j) == doctest::Approx(diff * diff));
    }
  }
  CHECK_THROWS_AS(acc.squared(std::vector<std::size_t>{}), InvalidSelection);
}

TEST_CASE("accumulator over a row subset") {
  const auto x = random_matrix(10, 3, 9);
  const std::vector<std::size_t> rows{7, 2, 5};
  const SquaredDistanceAccumulator acc(x, rows);
  CHECK(acc.size() == 3);
  const std::vector<std::size_t> f{0, 2};
  const auto d = acc.accumulate(f);
  const auto ref = distance_matrix(x, Selection{rows, FeatureSubset(f, 3)});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(d(i, j) - ref(i, j)) < 1e-12);
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  for (std::size_t cols : {3ul, 64ul, 5000ul}) {
    const auto x = random_matrix(37, cols, cols);
    std::vector<double> a(37 * 37), b(37 * 37), c(37 * 37);
    kernels::serial::pairwise_squared(x.values(), 37, cols, a);
    kernels::omp::pairwise_squared(x.values(), 37, cols, b, 1);
    kernels::omp::pairwise_squared(x.values(), 37, cols, c, 4);
    CHECK(a == b);
    CHECK(a == c);
  }
  const auto x = random_matrix(40, 20, 11);
  const auto s = distance_matrix(x, {}, kSerial);
  const auto p = distance_matrix(x, {}, Parallelism{Execution::Parallel, 3});
  CHECK(std::equal(s.entries().begin(), s.entries().end(), p.entries().begin()));
}

TEST_CASE("normalization is scale invariant") {
  const auto x = random_matrix(8, 3, 12);
  const auto a = distance_matrix(x);
  const auto b = distance_matrix(x.scaled(1000.0));
  CHECK(norm_linf(a, b) < 1e-12);
}
