#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "ivfs/error.hpp"
#include "ivfs/eval.hpp"
#include "ivfs/report.hpp"
#include "ivfs/rng.hpp"
#include "ivfs/synthetic.hpp"

using namespace ivfs;

namespace {

struct Blobs {
  DataMatrix x;
  LabelVector y;
};

Blobs blobs(std::size_t n, double gap, std::uint64_t seed) {
  auto rng = make_stream(seed, 0, 7);
  std::normal_distribution<double> normal;
  std::vector<double> v;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 2);
    for (int j = 0; j < 3; ++j) v.push_back(normal(rng) + (j == 0 ? c * gap : 0.0));
    y.push_back(c);
  }
  return {DataMatrix(n, 3, v), LabelVector(y, 2)};
}

IvfsConfig fixture_config(std::uint64_t seed, std::size_t k = 1000) {
  auto c = IvfsConfig::defaults(150, 100);
  c.k = k;
  c.n_tilde = 45;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("knn accuracy on separable blobs") {
  const auto b = blobs(100, 50.0, 1);
  CHECK(knn_accuracy(b.x, b.y, 3) == 1.0);
}

TEST_CASE("knn accuracy on shuffled labels is near chance") {
  const auto b = blobs(100, 50.0, 2);
  std::vector<int> y(b.y.labels().begin(), b.y.labels().end());
  auto rng = make_stream(4, 0, 9);
  std::shuffle(y.begin(), y.end(), rng);
  const double acc = knn_accuracy(b.x, LabelVector(y, 2), 3);
  CHECK(acc >= 0.3);
  CHECK(acc <= 0.7);
}

TEST_CASE("knn accuracy preconditions") {
  const auto b = blobs(20, 5.0, 3);
  CHECK_THROWS_AS(knn_accuracy(b.x, LabelVector(std::vector<int>(20, 0), 2), 1), InvalidParameter);
  const auto small = blobs(8, 5.0, 3);
  CHECK_THROWS_AS(knn_accuracy(small.x, small.y, 1), InvalidParameter);
  // One sample of class 1 among 30: most splits leave it out of training.
  std::vector<int> rare(30, 0);
  rare[7] = 1;
  const auto wide = blobs(30, 5.0, 4);
  CHECK_THROWS_AS(knn_accuracy(wide.x, LabelVector(rare, 2), 1), FoldError);
}

TEST_CASE("knn accuracy is deterministic in the seed") {
  const auto b = blobs(60, 1.0, 5);
  CHECK(knn_accuracy(b.x, b.y, 11) == knn_accuracy(b.x, b.y, 11));
}

TEST_CASE("all features give zero topology metrics") {
  const auto fx = synthetic::informative_noise({}, 0);
  const auto m = topo_metrics(fx.matrix, FeatureSubset::all(100));
  CHECK(m.w11 == 0.0);
  CHECK(m.w_inf == 0.0);
  CHECK(m.l1 == 0.0);
  CHECK(m.l2 == 0.0);
  CHECK(m.linf == 0.0);
}

TEST_CASE("signal features beat noise features on every metric") {
  const auto fx = synthetic::informative_noise({}, 1);
  const auto s = topo_metrics(fx.matrix, FeatureSubset(fx.signal_features, 100));
  const std::vector<std::size_t> noise(fx.noise_features.begin(), fx.noise_features.begin() + 10);
  const auto n = topo_metrics(fx.matrix, FeatureSubset(noise, 100));
  CHECK(s.w11 < n.w11);
  CHECK(s.w_inf < n.w_inf);
  CHECK(s.l1 < n.l1);
  CHECK(s.l2 < n.l2);
  CHECK(s.linf < n.linf);
}

TEST_CASE("metrics do not depend on sample order") {
  const auto fx = synthetic::informative_noise({}, 2);
  std::vector<std::size_t> perm(150);
  std::iota(perm.begin(), perm.end(), 0);
  auto rng = make_stream(2, 0, 3);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto f = FeatureSubset({1, 5, 9, 40, 77}, 100);
  const auto a = topo_metrics(fx.matrix, f);
  const auto b = topo_metrics(fx.matrix.select_rows(perm), f);
  CHECK(a.w11 == doctest::Approx(b.w11).epsilon(1e-9));
  CHECK(a.w_inf == doctest::Approx(b.w_inf).epsilon(1e-9));
  CHECK(a.l1 == doctest::Approx(b.l1).epsilon(1e-9));
  CHECK(a.l2 == doctest::Approx(b.l2).epsilon(1e-9));
  CHECK(a.linf == doctest::Approx(b.linf).epsilon(1e-12));
}

TEST_CASE("evaluation report") {
  const auto fx = synthetic::informative_noise({}, 3);
  const auto r = evaluate_selection(fx.matrix, &fx.labels, fx.signal_features, 0);
  REQUIRE(r.knn_accuracy);
  CHECK(*r.knn_accuracy > 0.9);
  CHECK(r.d0_used == 10);
  CHECK(r.l1_per_n2_x100 == doctest::Approx(r.l1 / (150.0 * 150.0) * 100.0));
  const auto again = evaluate_selection(fx.matrix, &fx.labels, fx.signal_features, 0);
  CHECK(report::to_json(r) == report::to_json(again));
  CHECK_FALSE(evaluate_selection(fx.matrix, nullptr, fx.signal_features, 0).knn_accuracy);
}

TEST_CASE("bootstrap stability") {
  const auto fx = synthetic::informative_noise({}, 4);
  auto c = fixture_config(4, 300);
  const auto identity = bootstrap_stability(fx.matrix, c, 3, 1, nullptr, {}, BootstrapMode::Identity);
  CHECK(identity.mean == 0.0);
  CHECK(identity.differing_counts == std::vector<std::size_t>{0, 0, 0});

  const auto b = blobs(30, 2.0, 6);
  IvfsConfig all;
  all.k = 50;
  all.d_tilde = 2;
  all.n_tilde = 5;
  all.d0 = 3;
  CHECK(bootstrap_stability(b.x, all, 4, 2).mean == 0.0);

  const auto resampled = bootstrap_stability(fx.matrix, fixture_config(4), 5, 9);
  CHECK(resampled.repetitions == 5);
  CHECK(resampled.mean <= 2.0);
}

TEST_CASE("extents") {
  CHECK(Extent::parse("0.3").resolve(100) == 30);
  CHECK(Extent::parse("0.31").resolve(100) == 31);
  CHECK(Extent::parse("0.001").resolve(100) == 1);
  CHECK(Extent::parse("7").resolve(100) == 7);
  CHECK(Extent::parse("700").resolve(100) == 100);
  CHECK_THROWS_AS(Extent::parse("0"), InvalidParameter);
  CHECK_THROWS_AS(Extent::parse("-2"), InvalidParameter);
  CHECK_THROWS_AS(Extent::parse("abc"), InvalidParameter);
  CHECK_THROWS_AS(Extent::parse("2.5"), InvalidParameter);
}

TEST_CASE("grid expansion order and caps") {
  GridSpec g;
  g.ks = {100, 200};
  g.d_tildes = {Extent{0.1}, Extent{5}};
  g.n_tildes = {Extent{0.5}};
  g.d0s = {3};
  g.n_tilde_cap = 20;
  CHECK(g.cell_count() == 4);
  const auto cells = expand_grid(g, 100, 50, 7);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].k == 100);
  CHECK(cells[0].d_tilde == 5);
  CHECK(cells[1].k == 100);
  CHECK(cells[1].d_tilde == 5);
  CHECK(cells[2].k == 200);
  for (const auto& c : cells) {
    CHECK(c.n_tilde == 20);
    CHECK(c.seed == 7);
  }
}

TEST_CASE("single-cell grid equals a direct evaluation") {
  const auto fx = synthetic::informative_noise({}, 5);
  GridSpec g;
  g.ks = {200};
  g.n_tildes = {Extent{0.3}};
  const auto cells = run_grid(fx.matrix, &fx.labels, g, 5);
  REQUIRE(cells.size() == 1);
  const auto direct = run_ivfs(fx.matrix, cells[0].config, &fx.labels);
  auto expected = evaluate_selection(fx.matrix, &fx.labels, direct.ranking.selected, 5);
  auto got = cells[0].report;
  expected.wall_time_seconds = got.wall_time_seconds = 0.0;
  CHECK(report::to_json(expected) == report::to_json(got));
  CHECK(cells[0].repetitions.size() == 1);
}

TEST_CASE("repeated cells average their repetitions") {
  const auto fx = synthetic::informative_noise({}, 6);
  GridSpec g;
  g.ks = {100};
  g.n_tildes = {Extent{0.1}};
  g.repeat = 3;
  const auto cells = run_grid(fx.matrix, nullptr, g, 10);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].seeds == std::vector<std::uint64_t>{10, 11, 12});
  double sum = 0.0;
  for (const auto& r : cells[0].repetitions) sum += r.linf;
  CHECK(cells[0].report.linf == doctest::Approx(sum / 3.0));
  std::ostringstream csv;
  report::write_grid_csv(csv, cells);
  CHECK(csv.str().find("linf_s12") != std::string::npos);
}

TEST_CASE("best per metric picks a dominating cell") {
  std::vector<GridCell> cells(2);
  cells[0].report = {0.7, 0.5, 0.5, 10.0, 1.0, 2.0, 0.6, 0.0, 10, "ivfs"};
  cells[1].report = {0.9, 0.1, 0.1, 5.0, 0.5, 1.0, 0.2, 0.0, 10, "ivfs"};
  const auto best = best_per_metric(cells);
  CHECK(best.knn_accuracy == std::optional<std::size_t>{1});
  CHECK(best.w11 == 1);
  CHECK(best.w_inf == 1);
  CHECK(best.l1 == 1);
  CHECK(best.l2 == 1);
  CHECK(best.linf == 1);
}

TEST_CASE("more subsets do not hurt the linf norm") {
  std::size_t wins = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto fx = synthetic::informative_noise({}, 20 + s);
    GridSpec g;
    g.ks = {500, 2000};
    g.n_tildes = {Extent{0.3}};
    const auto cells = run_grid(fx.matrix, nullptr, g, s);
    if (cells[1].report.linf <= cells[0].report.linf) ++wins;
  }
  CHECK(wins >= 4);
}

TEST_CASE("ranking file round trip") {
  FeatureRanking r;
  r.order = {2, 0, 1};
  r.scores = {-0.5, kNeverEvaluated, -0.25};
  r.counts = {3, 0, 4};
  r.selected = {2};
  std::stringstream io;
  report::write_ranking(io, r);
  CHECK(io.str().find("-inf") != std::string::npos);
  CHECK(report::read_ranking(io, 3) == std::vector<std::size_t>{2, 0, 1});
  std::istringstream bare("# external\n4\n1\n");
  CHECK(report::read_ranking(bare, 5) == std::vector<std::size_t>{4, 1});
  std::istringstream dup("1\n1\n");
  CHECK_THROWS_AS(report::read_ranking(dup, 5), InvalidSelection);
  std::istringstream range("9\n");
  CHECK_THROWS_AS(report::read_ranking(range, 5), InvalidSelection);
  std::istringstream junk("a b\n");
  CHECK_THROWS_AS(report::read_ranking(junk, 5), ParseError);
}
