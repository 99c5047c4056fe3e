#ifndef IVFS_ENGINE_HPP
#define IVFS_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ivfs/dataset.hpp"
#include "ivfs/execution.hpp"
#include "ivfs/feature_subset.hpp"

namespace ivfs {

/// Subset score: minus a distance-matrix discrepancy (linf, l1, l2) or minus
/// the leave-one-out 1-NN error rate (knn_error).
enum class ScoreKind { Linf, L1, L2, KnnError };

std::string_view to_string(ScoreKind kind);
/// Accepts "linf", "l1", "l2", "knn_error". Throws InvalidParameter otherwise.
ScoreKind parse_score_kind(std::string_view name);

/// How the subset distance matrix D_F is scaled before it is compared with D.
enum class SubsetNormalization {
  OwnMax,        // D_F / max(D_F)
  ReferenceMax,  // D_F / max(D)
};

struct IvfsConfig {
  std::size_t k = 1000;        // number of random subsets
  std::size_t d_tilde = 1;     // features per subset
  std::size_t n_tilde = 2;     // samples per subset
  std::size_t d0 = 1;          // features to select
  ScoreKind score = ScoreKind::Linf;
  std::uint64_t seed = 0;

  /// k = 1000, d_tilde = ceil(0.3 d), n_tilde = clamp(ceil(0.1 n), 2, 100), d0 = min(10, d).
  static IvfsConfig defaults(std::size_t sample_count, std::size_t feature_count);
  /// Throws InvalidParameter when any field is out of range for an n x d problem.
  void validate(std::size_t sample_count, std::size_t feature_count) const;
};

/// Score s(F) shared by every feature of F, evaluated on the given rows.
/// Implementations must be safe to call concurrently.
class SubsetScorer {
 public:
  virtual ~SubsetScorer() = default;
  virtual double score(std::span<const std::size_t> features, std::span<const std::size_t> rows) const = 0;
};

/// Scores subsets of a data matrix.
class DataSubsetScorer final : public SubsetScorer {
 public:
  /// Throws MissingLabels for ScoreKind::KnnError without labels.
  DataSubsetScorer(const DataMatrix& x, ScoreKind kind, const LabelVector* labels = nullptr,
                   SubsetNormalization normalization = SubsetNormalization::OwnMax);

  double score(std::span<const std::size_t> features, std::span<const std::size_t> rows) const override;

 private:
  const DataMatrix& x_;
  ScoreKind kind_;
  const LabelVector* labels_;
  SubsetNormalization normalization_;
};

/// One-shot subset score on the given rows (at least 2, distinct).
double subset_score(const DataMatrix& x, std::span<const std::size_t> rows, const FeatureSubset& features,
                    ScoreKind kind, const LabelVector* labels = nullptr,
                    SubsetNormalization normalization = SubsetNormalization::OwnMax);

/// Per-feature evaluation counts c_i and cumulative scores S_i.
struct ScoreBoard {
  std::vector<std::uint64_t> counters;
  std::vector<double> cumulative;

  explicit ScoreBoard(std::size_t feature_count = 0) : counters(feature_count, 0), cumulative(feature_count, 0.0) {}
  std::size_t never_evaluated() const;
};

inline constexpr double kNeverEvaluated = -std::numeric_limits<double>::infinity();

struct FeatureRanking {
  std::vector<std::size_t> order;    // permutation of [0, d), best first
  std::vector<double> scores;        // S_i / c_i, kNeverEvaluated when c_i = 0
  std::vector<std::uint64_t> counts; // c_i
  std::vector<std::size_t> selected; // first d0 entries of order
};

/// Sorts by score descending, ties by ascending feature index.
FeatureRanking rank_features(const ScoreBoard& board, std::size_t d0);

struct IvfsResult {
  ScoreBoard board;
  FeatureRanking ranking;
};

/// Features and rows drawn for iteration t. Both come from streams derived
/// from (seed, t) alone, so any iteration can be replayed independently.
std::vector<std::size_t> draw_features(std::uint64_t seed, std::uint64_t t, std::size_t feature_count,
                                       std::size_t d_tilde);
std::vector<std::size_t> draw_rows(std::uint64_t seed, std::uint64_t t, std::size_t sample_count,
                                   std::size_t n_tilde);

/// The random-subset inclusion-value scheme over an arbitrary scorer. Scores
/// of the k iterations are computed (possibly concurrently) and then reduced
/// in iteration order, so the output does not depend on thread count.
IvfsResult run_ivfs(const SubsetScorer& scorer, std::size_t feature_count, std::size_t sample_count,
                    const IvfsConfig& config, Parallelism par = {});

struct RunOptions {
  Parallelism parallelism{};
  SubsetNormalization normalization = SubsetNormalization::OwnMax;
};

IvfsResult run_ivfs(const DataMatrix& x, const IvfsConfig& config, const LabelVector* labels = nullptr,
                    const RunOptions& options = {});

inline constexpr std::uint64_t kExhaustiveMaxSubsets = 100000;

/// Exact inclusion value of every feature: the mean subset score over all
/// size-d_tilde subsets that contain it, using every row. Throws
/// OracleTooLarge when C(d, d_tilde) > kExhaustiveMaxSubsets.
std::vector<double> exhaustive_inclusion_value(const SubsetScorer& scorer, std::size_t feature_count,
                                               std::size_t sample_count, std::size_t d_tilde);
std::vector<double> exhaustive_inclusion_value(const DataMatrix& x, std::size_t d_tilde, ScoreKind kind,
                                               const LabelVector* labels = nullptr);

/// Ranking of features by a reference value vector (descending, ties by index).
std::vector<std::size_t> order_by_value(std::span<const double> values);

/// Number of feature pairs the reference strictly orders one way and `order`
/// places the other way. Pairs tied in the reference (within a relative
/// `tie_tolerance`, which absorbs summation-order rounding) are ignored.
std::size_t kendall_tau_distance(std::span<const std::size_t> order, std::span<const double> reference,
                                 double tie_tolerance = 1e-9);

/// C(n, r) as a double (exact for the magnitudes used here).
double binomial(std::size_t n, std::size_t r);

}  // namespace ivfs

#endif  // IVFS_ENGINE_HPP
