#include "ivfs/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "ivfs/distance.hpp"
#include "ivfs/error.hpp"
#include "ivfs/kernels.hpp"
#include "ivfs/knn.hpp"
#include "ivfs/rng.hpp"

namespace ivfs {
namespace {

constexpr std::uint32_t kFeatureStream = 0;
constexpr std::uint32_t kRowStream = 1;

std::vector<double> gather(const DataMatrix& x, std::span<const std::size_t> rows,
                           std::span<const std::size_t> features) {
  std::vector<double> block;
  block.reserve(rows.size() * features.size());
  for (std::size_t r : rows) {
    auto src = x.row(r);
    for (std::size_t f : features) block.push_back(src[f]);
  }
  return block;
}

std::vector<double> gather_rows(const DataMatrix& x, std::span<const std::size_t> rows) {
  std::vector<double> block;
  block.reserve(rows.size() * x.cols());
  for (std::size_t r : rows) {
    auto src = x.row(r);
    block.insert(block.end(), src.begin(), src.end());
  }
  return block;
}

std::vector<double> pairwise_distances(std::span<const double> block, std::size_t rows, std::size_t cols) {
  std::vector<double> out(rows * rows);
  kernels::serial::pairwise_squared(block, rows, cols, out);
  for (double& v : out) v = std::sqrt(v);
  return out;
}

}  // namespace

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::Linf:
      return "linf";
    case ScoreKind::L1:
      return "l1";
    case ScoreKind::L2:
      return "l2";
    case ScoreKind::KnnError:
      return "knn_error";
  }
  return "?";
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "linf") return ScoreKind::Linf;
  if (name == "l1") return ScoreKind::L1;
  if (name == "l2") return ScoreKind::L2;
  if (name == "knn_error") return ScoreKind::KnnError;
  throw InvalidParameter("unknown score '" + std::string(name) + "' (expected linf, l1, l2 or knn_error)");
}

IvfsConfig IvfsConfig::defaults(std::size_t sample_count, std::size_t feature_count) {
  IvfsConfig c;
  c.k = 1000;
  c.d_tilde = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(feature_count))));
  const auto tenth = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(sample_count)));
  c.n_tilde = std::min(std::max<std::size_t>(2, std::min<std::size_t>(tenth, 100)), sample_count);
  c.d0 = std::min<std::size_t>(10, feature_count);
  return c;
}

void IvfsConfig::validate(std::size_t sample_count, std::size_t feature_count) const {
  if (k < 1) throw InvalidParameter("k must be positive");
  if (d_tilde < 1 || d_tilde > feature_count) {
    throw InvalidParameter("d_tilde must lie in [1, " + std::to_string(feature_count) + "]");
  }
  if (n_tilde < 2 || n_tilde > sample_count) {
    throw InvalidParameter("n_tilde must lie in [2, " + std::to_string(sample_count) + "]");
  }
  if (d0 < 1 || d0 > feature_count) {
    throw InvalidParameter("d0 must lie in [1, " + std::to_string(feature_count) + "]");
  }
}

DataSubsetScorer::DataSubsetScorer(const DataMatrix& x, ScoreKind kind, const LabelVector* labels,
                                   SubsetNormalization normalization)
    : x_(x), kind_(kind), labels_(labels), normalization_(normalization) {
  if (kind_ == ScoreKind::KnnError) {
    if (!labels_) throw MissingLabels("score knn_error requires labels");
    if (labels_->size() != x_.rows()) throw ShapeError("label count does not match sample count");
  }
}

double DataSubsetScorer::score(std::span<const std::size_t> features, std::span<const std::size_t> rows) const {
  const std::size_t m = rows.size();
  if (m < 2) throw InvalidSelection("subset score needs at least 2 rows");
  if (features.empty()) throw InvalidSelection("subset score needs a non-empty feature set");

  const auto sub_block = gather(x_, rows, features);
  if (kind_ == ScoreKind::KnnError) {
    std::vector<int> sub_labels(m);
    for (std::size_t i = 0; i < m; ++i) sub_labels[i] = (*labels_)[rows[i]];
    return -leave_one_out_1nn_error(sub_block, m, features.size(), sub_labels);
  }

  const auto full_block = gather_rows(x_, rows);
  const auto full = DistanceMatrix::from_raw(m, pairwise_distances(full_block, m, x_.cols()));
  std::optional<double> normalizer;
  if (normalization_ == SubsetNormalization::ReferenceMax) normalizer = full.normalizer();
  if (normalizer && *normalizer == 0.0) normalizer.reset();
  const auto sub = DistanceMatrix::from_raw(m, pairwise_distances(sub_block, m, features.size()), normalizer);

  switch (kind_) {
    case ScoreKind::Linf:
      return -norm_linf(sub, full);
    case ScoreKind::L1:
      return -norm_l1(sub, full);
    case ScoreKind::L2:
      return -norm_l2(sub, full);
    case ScoreKind::KnnError:
      break;
  }
  return 0.0;
}

double subset_score(const DataMatrix& x, std::span<const std::size_t> rows, const FeatureSubset& features,
                    ScoreKind kind, const LabelVector* labels, SubsetNormalization normalization) {
  if (features.feature_count() != x.cols()) throw InvalidSelection("feature subset built for a different width");
  std::vector<std::size_t> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidSelection("row sample contains duplicates");
  }
  for (std::size_t r : rows) {
    if (r >= x.rows()) throw InvalidSelection("row index out of range");
  }
  return DataSubsetScorer(x, kind, labels, normalization).score(features.indices(), rows);
}

std::size_t ScoreBoard::never_evaluated() const {
  return static_cast<std::size_t>(std::count(counters.begin(), counters.end(), std::uint64_t{0}));
}

FeatureRanking rank_features(const ScoreBoard& board, std::size_t d0) {
  const std::size_t d = board.counters.size();
  FeatureRanking r;
  r.scores.resize(d);
  r.counts = board.counters;
  for (std::size_t i = 0; i < d; ++i) {
    r.scores[i] = board.counters[i] > 0 ? board.cumulative[i] / static_cast<double>(board.counters[i])
                                        : kNeverEvaluated;
  }
  r.order = order_by_value(r.scores);
  r.selected.assign(r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(std::min(d0, d)));
  return r;
}

std::vector<std::size_t> order_by_value(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

std::vector<std::size_t> draw_features(std::uint64_t seed, std::uint64_t t, std::size_t feature_count,
                                       std::size_t d_tilde) {
  auto rng = make_stream(seed, t, kFeatureStream);
  return sample_without_replacement(rng, feature_count, d_tilde);
}

std::vector<std::size_t> draw_rows(std::uint64_t seed, std::uint64_t t, std::size_t sample_count,
                                   std::size_t n_tilde) {
  if (n_tilde == sample_count) {
    std::vector<std::size_t> all(sample_count);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  auto rng = make_stream(seed, t, kRowStream);
  return sample_without_replacement(rng, sample_count, n_tilde);
}

IvfsResult run_ivfs(const SubsetScorer& scorer, std::size_t feature_count, std::size_t sample_count,
                    const IvfsConfig& config, Parallelism par) {
  config.validate(sample_count, feature_count);
  const std::size_t k = config.k;
  std::vector<double> scores(k);

  auto evaluate = [&](std::size_t t) {
    const auto features = draw_features(config.seed, t, feature_count, config.d_tilde);
    const auto rows = draw_rows(config.seed, t, sample_count, config.n_tilde);
    scores[t] = scorer.score(features, rows);
  };

  if (par.mode == Execution::Serial) {
    for (std::size_t t = 0; t < k; ++t) evaluate(t);
  } else {
    std::exception_ptr failure;
    const int team = par.threads > 0 ? par.threads : omp_get_max_threads();
    const auto count = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
    for (std::int64_t t = 0; t < count; ++t) {
      try {
        evaluate(static_cast<std::size_t>(t));
      } catch (...) {
#pragma omp critical(ivfs_run_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  // Reduction in iteration order keeps the floating-point sums reproducible.
  ScoreBoard board(feature_count);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t f : draw_features(config.seed, t, feature_count, config.d_tilde)) {
      ++board.counters[f];
      board.cumulative[f] += scores[t];
    }
  }
  auto ranking = rank_features(board, config.d0);
  return {std::move(board), std::move(ranking)};
}

IvfsResult run_ivfs(const DataMatrix& x, const IvfsConfig& config, const LabelVector* labels,
                    const RunOptions& options) {
  config.validate(x.rows(), x.cols());
  DataSubsetScorer scorer(x, config.score, labels, options.normalization);
  return run_ivfs(scorer, x.cols(), x.rows(), config, options.parallelism);
}

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double c = 1.0;
  for (std::size_t i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(c);
}

std::vector<double> exhaustive_inclusion_value(const SubsetScorer& scorer, std::size_t feature_count,
                                               std::size_t sample_count, std::size_t d_tilde) {
  if (d_tilde < 1 || d_tilde > feature_count) throw InvalidParameter("d_tilde out of range");
  if (binomial(feature_count, d_tilde) > static_cast<double>(kExhaustiveMaxSubsets)) {
    throw OracleTooLarge("C(" + std::to_string(feature_count) + ", " + std::to_string(d_tilde) +
                         ") exceeds the exhaustive enumeration limit");
  }
  std::vector<std::size_t> rows(sample_count);
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  std::vector<double> sums(feature_count, 0.0);
  std::vector<std::size_t> subset(d_tilde);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  while (true) {
    const double s = scorer.score(subset, rows);
    for (std::size_t f : subset) sums[f] += s;
    // Next combination in lexicographic order.
    std::size_t pos = d_tilde;
    while (pos > 0 && subset[pos - 1] == feature_count - d_tilde + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < d_tilde; ++i) subset[i] = subset[i - 1] + 1;
  }
  const double per_feature = binomial(feature_count - 1, d_tilde - 1);
  for (double& s : sums) s /= per_feature;
  return sums;
}

std::vector<double> exhaustive_inclusion_value(const DataMatrix& x, std::size_t d_tilde, ScoreKind kind,
                                               const LabelVector* labels) {
  DataSubsetScorer scorer(x, kind, labels);
  return exhaustive_inclusion_value(scorer, x.cols(), x.rows(), d_tilde);
}

std::size_t kendall_tau_distance(std::span<const std::size_t> order, std::span<const double> reference,
                                 double tie_tolerance) {
  const std::size_t d = reference.size();
  if (order.size() != d) throw ShapeError("ranking and reference sizes differ");
  std::vector<std::size_t> position(d);
  for (std::size_t p = 0; p < d; ++p) position[order[p]] = p;
  std::size_t discordant = 0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      const double scale = std::max({1.0, std::abs(reference[a]), std::abs(reference[b])});
      if (reference[a] - reference[b] > tie_tolerance * scale && position[a] > position[b]) ++discordant;
    }
  }
  return discordant;
}

}  // namespace ivfs
