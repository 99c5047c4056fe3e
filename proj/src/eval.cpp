#include "ivfs/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "ivfs/diagram_metrics.hpp"
#include "ivfs/error.hpp"
#include "ivfs/knn.hpp"
#include "ivfs/rng.hpp"

namespace ivfs {
namespace {

constexpr std::uint32_t kSplitStream = 21;
constexpr std::uint32_t kSplitRetryStream = 22;
constexpr std::uint32_t kBootstrapStream = 31;

std::vector<std::size_t> shuffled(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
  return perm;
}

bool covers_classes(const LabelVector& labels, std::span<const std::size_t> rows, const std::set<int>& present) {
  std::set<int> seen;
  for (std::size_t r : rows) seen.insert(labels[r]);
  return seen == present;
}

std::vector<double> gather(const DataMatrix& x, std::span<const std::size_t> rows) {
  std::vector<double> block;
  block.reserve(rows.size() * x.cols());
  for (std::size_t r : rows) {
    auto src = x.row(r);
    block.insert(block.end(), src.begin(), src.end());
  }
  return block;
}

}  // namespace

double knn_accuracy(const DataMatrix& x, const LabelVector& labels, std::uint64_t seed,
                    const KnnProtocol& protocol) {
  const std::size_t n = x.rows();
  if (labels.size() != n) throw ShapeError("label count does not match sample count");
  if (n < 10) throw InvalidParameter("KNN accuracy needs at least 10 samples");
  if (protocol.splits == 0 || protocol.neighbors.empty()) throw InvalidParameter("empty KNN protocol");
  const std::set<int> present(labels.labels().begin(), labels.labels().end());
  if (present.size() < 2) throw InvalidParameter("KNN accuracy needs at least 2 classes present");

  const auto n_train = static_cast<std::size_t>(std::llround(protocol.train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) throw InvalidParameter("train fraction leaves an empty split");

  std::vector<double> acc_sum(protocol.neighbors.size(), 0.0);
  for (std::size_t s = 0; s < protocol.splits; ++s) {
    auto rng = make_stream(seed, s, kSplitStream);
    auto perm = shuffled(rng, n);
    if (!covers_classes(labels, std::span(perm).first(n_train), present)) {
      auto retry = make_stream(seed, s, kSplitRetryStream);
      perm = shuffled(retry, n);
      if (!covers_classes(labels, std::span(perm).first(n_train), present)) {
        throw FoldError("a class is missing from the training part of split " + std::to_string(s));
      }
    }
    std::span<const std::size_t> train_rows(perm.data(), n_train);
    std::span<const std::size_t> test_rows(perm.data() + n_train, n - n_train);
    const auto train = gather(x, train_rows);
    const auto test = gather(x, test_rows);
    std::vector<int> train_labels;
    for (std::size_t r : train_rows) train_labels.push_back(labels[r]);

    for (std::size_t kk = 0; kk < protocol.neighbors.size(); ++kk) {
      const auto pred = knn_classify(train, train_labels, test, x.cols(), protocol.neighbors[kk],
                                     labels.class_count());
      std::size_t correct = 0;
      for (std::size_t t = 0; t < test_rows.size(); ++t) correct += pred[t] == labels[test_rows[t]];
      acc_sum[kk] += static_cast<double>(correct) / static_cast<double>(test_rows.size());
    }
  }
  return *std::max_element(acc_sum.begin(), acc_sum.end()) / static_cast<double>(protocol.splits);
}

PersistenceDiagram evaluation_diagram(const DistanceMatrix& d, const TopoOptions& options) {
  const auto filt = build_filtration(d, options.alpha_max);
  auto diag = options.include_dim0 ? rips_persistence(filt) : persistence_h1(filt);
  return threshold_diagram(diag, options.epsilon);
}

TopoMetrics topo_metrics(const DistanceMatrix& full, const DistanceMatrix& subset, const TopoOptions& options) {
  TopoMetrics m;
  m.l1 = norm_l1(subset, full);
  m.l2 = norm_l2(subset, full);
  m.linf = norm_linf(subset, full);
  const auto a = evaluation_diagram(full, options);
  const auto b = evaluation_diagram(subset, options);
  m.w11 = wasserstein_by_dim(a, b, 1.0, CostNorm::L1);
  m.w_inf = bottleneck_by_dim(a, b);
  return m;
}

TopoMetrics topo_metrics(const DataMatrix& x, const FeatureSubset& features, const TopoOptions& options) {
  const auto full = distance_matrix(x, {}, options.parallelism);
  const auto sub = distance_matrix(x, Selection{std::nullopt, features}, options.parallelism);
  return topo_metrics(full, sub, options);
}

EvalReport evaluate_selection(const DataMatrix& x, const LabelVector* labels,
                              std::span<const std::size_t> selected, std::uint64_t seed,
                              const TopoOptions& options) {
  std::vector<std::size_t> idx(selected.begin(), selected.end());
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw InvalidSelection("selected features contain duplicates");
  }
  const FeatureSubset features(std::move(idx), x.cols());

  EvalReport r;
  const auto m = topo_metrics(x, features, options);
  r.w11 = m.w11;
  r.w_inf = m.w_inf;
  r.l1 = m.l1;
  r.l2 = m.l2;
  r.linf = m.linf;
  const auto n = static_cast<double>(x.rows());
  r.l1_per_n2_x100 = m.l1 / (n * n) * 100.0;
  r.d0_used = features.size();
  if (labels) r.knn_accuracy = knn_accuracy(x.select_features(features), *labels, seed);
  return r;
}

StabilityResult bootstrap_stability(const DataMatrix& x, const IvfsConfig& config, std::size_t repetitions,
                                    std::uint64_t seed, const LabelVector* labels, const RunOptions& options,
                                    BootstrapMode mode) {
  if (repetitions < 1) throw InvalidParameter("repetitions must be at least 1");
  StabilityResult out;
  out.repetitions = repetitions;
  out.reference_selection = run_ivfs(x, config, labels, options).ranking.selected;
  const std::set<std::size_t> reference(out.reference_selection.begin(), out.reference_selection.end());

  const std::size_t n = x.rows();
  for (std::size_t r = 0; r < repetitions; ++r) {
    std::vector<std::size_t> rows(n);
    if (mode == BootstrapMode::Identity) {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    } else {
      auto rng = make_stream(seed, r, kBootstrapStream);
      for (auto& row : rows) row = static_cast<std::size_t>(uniform_below(rng, n));
    }
    const auto xb = x.select_rows(rows);
    std::optional<LabelVector> yb;
    if (labels) yb = labels->select(rows);
    const auto selected = run_ivfs(xb, config, yb ? &*yb : nullptr, options).ranking.selected;
    std::size_t differing = 0;
    for (std::size_t f : reference) {
      if (std::find(selected.begin(), selected.end(), f) == selected.end()) ++differing;
    }
    out.differing_counts.push_back(differing);
  }
  out.mean = std::accumulate(out.differing_counts.begin(), out.differing_counts.end(), 0.0) /
             static_cast<double>(repetitions);
  return out;
}

std::size_t Extent::resolve(std::size_t total) const {
  if (value < 1.0) {
    const auto v = static_cast<std::size_t>(std::ceil(value * static_cast<double>(total)));
    return std::clamp<std::size_t>(v, 1, total);
  }
  return std::min(static_cast<std::size_t>(value), total);
}

Extent Extent::parse(const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidParameter("not a number: '" + text + "'");
  }
  if (!(v > 0.0)) throw InvalidParameter("count must be positive: '" + text + "'");
  if (v >= 1.0 && v != std::floor(v)) throw InvalidParameter("absolute count must be an integer: '" + text + "'");
  return Extent{v};
}

std::size_t GridSpec::cell_count() const {
  return ks.size() * d_tildes.size() * n_tildes.size() * d0s.size() * scores.size();
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t r) { return seed + r; }

std::vector<IvfsConfig> expand_grid(const GridSpec& grid, std::size_t sample_count, std::size_t feature_count,
                                    std::uint64_t seed) {
  if (grid.cell_count() == 0) throw InvalidParameter("parameter grid is empty");
  std::vector<IvfsConfig> out;
  for (std::size_t k : grid.ks) {
    for (const auto& dt : grid.d_tildes) {
      for (const auto& nt : grid.n_tildes) {
        for (std::size_t d0 : grid.d0s) {
          for (ScoreKind score : grid.scores) {
            IvfsConfig c;
            c.k = k;
            c.d_tilde = dt.resolve(feature_count);
            c.n_tilde = nt.resolve(sample_count);
            if (grid.n_tilde_cap) c.n_tilde = std::min(c.n_tilde, *grid.n_tilde_cap);
            if (nt.value < 1.0) c.n_tilde = std::max<std::size_t>(c.n_tilde, 2);
            c.d0 = d0;
            c.score = score;
            c.seed = seed;
            c.validate(sample_count, feature_count);
            out.push_back(c);
          }
        }
      }
    }
  }
  return out;
}

std::vector<GridCell> run_grid(const DataMatrix& x, const LabelVector* labels, const GridSpec& grid,
                               std::uint64_t seed, const TopoOptions& topo, const RunOptions& options) {
  if (grid.repeat < 1) throw InvalidParameter("repeat must be at least 1");
  std::vector<GridCell> cells;
  for (const auto& config : expand_grid(grid, x.rows(), x.cols(), seed)) {
    GridCell cell;
    cell.config = config;
    for (std::size_t r = 0; r < grid.repeat; ++r) {
      auto run_config = config;
      run_config.seed = repetition_seed(seed, r);
      const auto start = std::chrono::steady_clock::now();
      const auto result = run_ivfs(x, run_config, labels, options);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      auto report = evaluate_selection(x, labels, result.ranking.selected, run_config.seed, topo);
      report.wall_time_seconds = elapsed.count();
      cell.repetitions.push_back(report);
      cell.seeds.push_back(run_config.seed);
    }
    auto& avg = cell.report;
    const auto reps = static_cast<double>(cell.repetitions.size());
    double knn = 0.0;
    for (const auto& rep : cell.repetitions) {
      avg.w11 += rep.w11 / reps;
      avg.w_inf += rep.w_inf / reps;
      avg.l1 += rep.l1 / reps;
      avg.l1_per_n2_x100 += rep.l1_per_n2_x100 / reps;
      avg.l2 += rep.l2 / reps;
      avg.linf += rep.linf / reps;
      avg.wall_time_seconds += rep.wall_time_seconds / reps;
      if (rep.knn_accuracy) knn += *rep.knn_accuracy / reps;
    }
    if (labels) avg.knn_accuracy = knn;
    avg.d0_used = config.d0;
    cells.push_back(std::move(cell));
  }
  return cells;
}

BestPerMetric best_per_metric(std::span<const GridCell> cells) {
  if (cells.empty()) throw InvalidParameter("no grid cells");
  BestPerMetric best;
  auto pick_min = [&](auto field) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (field(cells[i].report) < field(cells[arg].report)) arg = i;
    }
    return arg;
  };
  best.w11 = pick_min([](const EvalReport& r) { return r.w11; });
  best.w_inf = pick_min([](const EvalReport& r) { return r.w_inf; });
  best.l1 = pick_min([](const EvalReport& r) { return r.l1; });
  best.l2 = pick_min([](const EvalReport& r) { return r.l2; });
  best.linf = pick_min([](const EvalReport& r) { return r.linf; });
  if (cells.front().report.knn_accuracy) {
    best.knn_accuracy = pick_min([](const EvalReport& r) { return -r.knn_accuracy.value_or(0.0); });
  }
  return best;
}

}  // namespace ivfs
