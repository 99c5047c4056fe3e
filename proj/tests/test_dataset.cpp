#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ivfs/dataset.hpp"
#include "ivfs/error.hpp"
#include "ivfs/feature_subset.hpp"
#include "ivfs/rng.hpp"

using namespace ivfs;

TEST_CASE("csv with header reads back") {
  std::istringstream in("a,b\n1,2\n3,4\n5,6\n");
  const auto data = read_csv(in);
  CHECK(data.matrix.rows() == 3);
  CHECK(data.matrix.cols() == 2);
  CHECK(data.matrix(2, 1) == 6.0);
  CHECK(data.matrix.feature_names() == std::vector<std::string>{"a", "b"});
  CHECK_FALSE(data.labels);
}

TEST_CASE("csv without header") {
  std::istringstream in("1,2\n3,4\n");
  const auto data = read_csv(in);
  CHECK(data.matrix.rows() == 2);
  CHECK(data.matrix.feature_names().empty());
}

TEST_CASE("label column is encoded in first-appearance order") {
  std::istringstream in("x,y\n1,a\n2,b\n3,a\n");
  const auto data = read_csv(in, LabelColumn{std::string("y")});
  REQUIRE(data.labels);
  CHECK(data.labels->class_count() == 2);
  CHECK(data.labels->labels()[0] == 0);
  CHECK(data.labels->labels()[1] == 1);
  CHECK(data.labels->labels()[2] == 0);
  CHECK(data.matrix.cols() == 1);
}

TEST_CASE("label column by index") {
  std::istringstream in("1,0,2\n3,1,4\n");
  const auto data = read_csv(in, LabelColumn{std::size_t{1}});
  REQUIRE(data.labels);
  CHECK(data.matrix.cols() == 2);
  CHECK(data.matrix(1, 1) == 4.0);
}

TEST_CASE("non-numeric cell reports its coordinates") {
  std::istringstream in("a,b\n1,2\n3,abc\n");
  try {
    read_csv(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == 2);
  }
}

TEST_CASE("ragged rows and empty input") {
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), EmptyInput);
  std::istringstream header_only("a,b\n");
  CHECK_THROWS_AS(read_csv(header_only), EmptyInput);
}

TEST_CASE("missing label column") {
  std::istringstream in("a,b\n1,2\n3,4\n");
  CHECK_THROWS_AS(read_csv(in, LabelColumn{std::string("y")}), InvalidParameter);
}

TEST_CASE("single label class is rejected") {
  std::istringstream in("a,y\n1,z\n2,z\n");
  CHECK_THROWS_AS(read_csv(in, LabelColumn{std::string("y")}), InvalidParameter);
}

TEST_CASE("matrix invariants") {
  CHECK_THROWS_AS(DataMatrix(1, 2, {1.0, 2.0}), InvalidParameter);
  CHECK_THROWS_AS(DataMatrix(2, 1, {1.0, NAN}), InvalidParameter);
  CHECK_THROWS_AS(DataMatrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
}

TEST_CASE("write then read round trips exactly") {
  auto rng = make_stream(3, 0, 7);
  std::vector<double> v(20);
  for (auto& e : v) e = uniform_unit(rng) * 1e3 - 500.0;
  const DataMatrix m(5, 4, v, {"p", "q", "r", "s"});
  const auto labels = LabelVector::from_tokens(std::vector<std::string>{"u", "v", "u", "w", "v"});
  std::stringstream io;
  write_csv(io, m, &labels);
  const auto back = read_csv(io, LabelColumn{std::string("label")});
  CHECK(std::equal(back.matrix.values().begin(), back.matrix.values().end(), m.values().begin()));
  REQUIRE(back.labels);
  CHECK(std::equal(back.labels->labels().begin(), back.labels->labels().end(), labels.labels().begin()));
}

TEST_CASE("standardize examples") {
  const DataMatrix m(3, 2, {1.0, 5.0, 2.0, 5.0, 3.0, 5.0});
  const auto z = standardize(m);
  CHECK(z(0, 0) == doctest::Approx(-1.0));
  CHECK(z(1, 0) == doctest::Approx(0.0));
  CHECK(z(2, 0) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(z(i, 1) == 0.0);
  CHECK(z.standardized());
}

TEST_CASE("standardized columns have zero mean and unit deviation") {
  auto rng = make_stream(9, 0, 7);
  std::vector<double> v(200);
  for (auto& e : v) e = uniform_unit(rng) * 40.0 + 3.0;
  const auto z = standardize(DataMatrix(50, 4, v));
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += z(i, j);
    mean /= 50.0;
    double var = 0.0;
    for (std::size_t i = 0; i < 50; ++i) var += (z(i, j) - mean) * (z(i, j) - mean);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var / 49.0) - 1.0) < 1e-9);
  }
}

TEST_CASE("feature subsets are sorted, distinct and in range") {
  CHECK_THROWS_AS(FeatureSubset({}, 3), InvalidSelection);
  CHECK_THROWS_AS(FeatureSubset({2, 1}, 3), InvalidSelection);
  CHECK_THROWS_AS(FeatureSubset({1, 1}, 3), InvalidSelection);
  CHECK_THROWS_AS(FeatureSubset({3}, 3), InvalidSelection);
  const auto f = FeatureSubset::from_unsorted({2, 0}, 3);
  CHECK(f.contains(0));
  CHECK_FALSE(f.contains(1));
  CHECK(FeatureSubset::all(3).is_all());
}

TEST_CASE("row selection keeps duplicates") {
  const DataMatrix m(3, 1, {1.0, 2.0, 3.0});
  const std::vector<std::size_t> rows{2, 2, 0};
  const auto s = m.select_rows(rows);
  CHECK(s.rows() == 3);
  CHECK(s(0, 0) == 3.0);
  CHECK(s(1, 0) == 3.0);
  CHECK(s(2, 0) == 1.0);
}
