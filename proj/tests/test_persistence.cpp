#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "ivfs/distance.hpp"
#include "ivfs/error.hpp"
#include "ivfs/persistence.hpp"
#include "ivfs/rng.hpp"
#include "ivfs/synthetic.hpp"

using namespace ivfs;

namespace {

DistanceMatrix cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  return distance_matrix(synthetic::uniform_cloud(n, dim, seed));
}

// Prim's algorithm on the full matrix.
std::vector<double> mst_weights(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  std::vector<char> in(n, 0);
  std::vector<double> best(n, INFINITY);
  std::vector<double> out;
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    in[u] = 1;
    if (step > 0) out.push_back(best[u]);
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v]) best[v] = std::min(best[v], d(u, v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("filtration keeps edges up to alpha_max") {
  const auto d = DistanceMatrix::from_entries(3, {0.0, 1.0 / 3, 1.0, 1.0 / 3, 0.0, 2.0 / 3, 1.0, 2.0 / 3, 0.0});
  const auto half = build_filtration(d, 0.5);
  REQUIRE(half.edges.size() == 1);
  CHECK(half.edges[0].value == doctest::Approx(1.0 / 3));
  CHECK(build_filtration(d, 1.0).edges.size() == 3);
  CHECK_THROWS_AS(build_filtration(d, 0.0), InvalidParameter);
  CHECK_THROWS_AS(build_filtration(d, 1.5), InvalidParameter);

  const auto zero = DistanceMatrix::from_entries(3, std::vector<double>(9, 0.0), 0.0);
  const auto f = build_filtration(zero, 0.5);
  CHECK(f.edges.size() == 3);
  for (const auto& e : f.edges) CHECK(e.value == 0.0);
}

TEST_CASE("filtration order is by value then vertex indices") {
  const auto f = build_filtration(cloud(9, 2, 1), 1.0);
  for (std::size_t e = 1; e < f.edges.size(); ++e) {
    const auto& a = f.edges[e - 1];
    const auto& b = f.edges[e];
    CHECK(std::tie(a.value, a.i, a.j) < std::tie(b.value, b.i, b.j));
  }
}

TEST_CASE("dim-0 bars of three points on a line") {
  const auto d = distance_matrix(DataMatrix(3, 1, {0.0, 1.0, 3.0}));
  const auto h0 = persistence_h0(build_filtration(d, 1.0)).sorted();
  REQUIRE(h0.size() == 3);
  std::vector<double> deaths;
  for (const auto& b : h0.bars) {
    CHECK(b.dim == 0);
    CHECK(b.birth == 0.0);
    deaths.push_back(b.death);
  }
  std::sort(deaths.begin(), deaths.end());
  CHECK(deaths[0] == doctest::Approx(1.0 / 3));
  CHECK(deaths[1] == doctest::Approx(2.0 / 3));
  CHECK(deaths[2] == 1.0);
  CHECK(persistence_h1(build_filtration(d, 1.0)).size() == 0);
}

TEST_CASE("two identical points") {
  const auto d = distance_matrix(DataMatrix(2, 1, {4.0, 4.0}));
  const auto h0 = persistence_h0(build_filtration(d, 0.5)).sorted();
  REQUIRE(h0.size() == 2);
  CHECK(h0.bars[0] == Bar{0, 0.0, 0.0});
  CHECK(h0.bars[1] == Bar{0, 0.0, 0.5});
}

TEST_CASE("dim-0 deaths are the minimum spanning tree weights") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto d = cloud(10, 3, 100 + s);
    const double alpha = 0.5;
    const auto h0 = persistence_h0(build_filtration(d, alpha));
    std::vector<double> deaths;
    for (const auto& b : h0.bars) deaths.push_back(b.death);
    std::sort(deaths.begin(), deaths.end());
    std::vector<double> expected;
    for (double w : mst_weights(d))
      if (w <= alpha) expected.push_back(w);
    while (expected.size() < 10) expected.push_back(alpha);
    CHECK(deaths == expected);
  }
}

TEST_CASE("unit square has one loop") {
  const DataMatrix x(4, 2, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0});
  const auto filt = build_filtration(distance_matrix(x), 1.0);
  const auto h1 = persistence_h1(filt);
  REQUIRE(h1.size() == 1);
  CHECK(h1.bars[0].dim == 1);
  CHECK(h1.bars[0].birth == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(h1.bars[0].death == 1.0);
  CHECK(same_multiset(persistence_oracle(filt, 1), rips_persistence(filt)));
}

TEST_CASE("circle of 12 points has one dominant loop") {
  const auto filt = build_filtration(distance_matrix(synthetic::circle(12)), 1.0);
  const auto h1 = persistence_h1(filt);
  REQUIRE(h1.size() >= 1);
  std::vector<double> life;
  for (const auto& b : h1.bars) life.push_back(b.death - b.birth);
  std::sort(life.rbegin(), life.rend());
  CHECK(life[0] > 0.0);
  for (std::size_t i = 1; i < life.size(); ++i) CHECK(life[0] >= 5.0 * life[i]);
  CHECK(same_multiset(persistence_oracle(filt, 1).of_dim(1), h1));
}

TEST_CASE("oracle equivalence on random 8-point clouds") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto filt = build_filtration(cloud(8, 2 + s % 3, 500 + s), s % 2 ? 0.6 : 1.0);
    CHECK(same_multiset(persistence_oracle(filt, 1), rips_persistence(filt), 1e-12));
  }
}

TEST_CASE("oracle edge cases") {
  const RipsFiltration empty{5, {}, 0.5};
  const auto diag = persistence_oracle(empty, 1);
  CHECK(diag.size() == 5);
  for (const auto& b : diag.bars) CHECK(b == Bar{0, 0.0, 0.5});
  CHECK(same_multiset(rips_persistence(empty), diag));
  CHECK_THROWS_AS(persistence_oracle(build_filtration(cloud(17, 2, 1), 0.3), 1), OracleTooLarge);
}

TEST_CASE("diagram does not depend on point order") {
  const auto x = synthetic::uniform_cloud(30, 2, 77);
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  auto rng = make_stream(1, 2, 3);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto a = rips_persistence(build_filtration(distance_matrix(x), 0.5));
  const auto b = rips_persistence(build_filtration(distance_matrix(x.select_rows(perm)), 0.5));
  CHECK(same_multiset(a, b, 1e-12));
}

TEST_CASE("thresholding keeps lifetimes at or above epsilon") {
  PersistenceDiagram d{{{1, 0.0, 0.05}, {1, 0.2, 0.3}, {1, 0.1, 0.4}}};
  const auto kept = threshold_diagram(d, 0.1);
  CHECK(kept.size() == 2);
  CHECK(threshold_diagram(d, 0.0).bars == d.bars);
  CHECK(threshold_diagram(PersistenceDiagram{}, 0.1).size() == 0);
  CHECK_THROWS_AS(threshold_diagram(d, -0.1), InvalidParameter);
}

TEST_CASE("diagram text round trip") {
  const auto diag = rips_persistence(build_filtration(cloud(12, 2, 4), 0.7));
  std::stringstream io;
  write_diagram(io, diag);
  const auto back = read_diagram(io);
  CHECK(back.sorted().bars == diag.sorted().bars);
}
