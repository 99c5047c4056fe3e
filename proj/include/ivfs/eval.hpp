#ifndef IVFS_EVAL_HPP
#define IVFS_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ivfs/dataset.hpp"
#include "ivfs/distance.hpp"
#include "ivfs/engine.hpp"
#include "ivfs/persistence.hpp"

namespace ivfs {

struct KnnProtocol {
  std::size_t splits = 10;
  double train_fraction = 0.8;
  std::vector<std::size_t> neighbors{1, 3, 5, 10};
};

/// Best mean test accuracy over the K grid, each mean taken over random
/// train/test splits drawn from `seed`. A split that leaves a class out of
/// the training part is redrawn once, then FoldError.
double knn_accuracy(const DataMatrix& x, const LabelVector& labels, std::uint64_t seed,
                    const KnnProtocol& protocol = {});

struct TopoOptions {
  double alpha_max = 0.5;
  double epsilon = 0.1;
  bool include_dim0 = false;
  Parallelism parallelism{};
};

struct TopoMetrics {
  double w11 = 0.0;    // Wasserstein p = 1, q = 1
  double w_inf = 0.0;  // bottleneck
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Thresholded diagram used for the diagram distances (dim 1, plus dim 0 on request).
PersistenceDiagram evaluation_diagram(const DistanceMatrix& d, const TopoOptions& options);

/// Norms between D and D_F plus diagram distances between their diagrams.
TopoMetrics topo_metrics(const DataMatrix& x, const FeatureSubset& features, const TopoOptions& options = {});
TopoMetrics topo_metrics(const DistanceMatrix& full, const DistanceMatrix& subset, const TopoOptions& options = {});

struct EvalReport {
  std::optional<double> knn_accuracy;
  double w11 = 0.0;
  double w_inf = 0.0;
  double l1 = 0.0;
  double l1_per_n2_x100 = 0.0;  // l1 / n^2 * 100
  double l2 = 0.0;
  double linf = 0.0;
  double wall_time_seconds = 0.0;
  std::size_t d0_used = 0;
  std::string source = "ivfs";
};

/// Evaluates a feature selection against the full data. Pure in
/// (x, labels, selected, seed); wall_time_seconds is left at 0.
EvalReport evaluate_selection(const DataMatrix& x, const LabelVector* labels,
                              std::span<const std::size_t> selected, std::uint64_t seed,
                              const TopoOptions& options = {});

enum class BootstrapMode {
  Resample,  // n draws with replacement
  Identity,  // the original rows, unchanged
};

struct StabilityResult {
  std::vector<std::size_t> differing_counts;  // |F_X \ F_B| per repetition
  std::size_t repetitions = 0;
  double mean = 0.0;
  std::vector<std::size_t> reference_selection;
};

/// Runs the selection on x, then on `repetitions` bootstrap resamples with the
/// same config, counting features selected on x but not on the resample.
StabilityResult bootstrap_stability(const DataMatrix& x, const IvfsConfig& config, std::size_t repetitions,
                                    std::uint64_t seed, const LabelVector* labels = nullptr,
                                    const RunOptions& options = {},
                                    BootstrapMode mode = BootstrapMode::Resample);

/// A count given either absolutely (>= 1) or as a fraction in (0, 1) of a total.
struct Extent {
  double value = 1.0;

  /// Fractions resolve to ceil(value * total); the result is clamped to [1, total].
  std::size_t resolve(std::size_t total) const;
  /// Parses "30" or "0.3". Throws InvalidParameter for values <= 0.
  static Extent parse(const std::string& text);
};

struct GridSpec {
  std::vector<std::size_t> ks{1000};
  std::vector<Extent> d_tildes{Extent{0.3}};
  std::vector<Extent> n_tildes{Extent{0.1}};
  std::vector<std::size_t> d0s{10};
  std::vector<ScoreKind> scores{ScoreKind::Linf};
  std::optional<std::size_t> n_tilde_cap;  // n_tilde = min(resolved, cap)
  std::size_t repeat = 1;

  std::size_t cell_count() const;
};

struct GridCell {
  IvfsConfig config;
  EvalReport report;                   // metrics averaged over repetitions
  std::vector<EvalReport> repetitions; // one per repeat seed
  std::vector<std::uint64_t> seeds;
};

/// Seed of repetition r of a grid run (r = 0 uses `seed` itself).
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t r);

/// Every combination of the grid in definition order (k, d_tilde, n_tilde, d0, score).
std::vector<IvfsConfig> expand_grid(const GridSpec& grid, std::size_t sample_count, std::size_t feature_count,
                                    std::uint64_t seed);

/// Runs and evaluates every grid cell; cells are reported in definition order.
std::vector<GridCell> run_grid(const DataMatrix& x, const LabelVector* labels, const GridSpec& grid,
                               std::uint64_t seed, const TopoOptions& topo = {}, const RunOptions& options = {});

/// Index of the best cell for each metric (lowest distance, highest accuracy);
/// ties go to the earliest cell.
struct BestPerMetric {
  std::optional<std::size_t> knn_accuracy;
  std::size_t w11 = 0;
  std::size_t w_inf = 0;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  std::size_t linf = 0;
};

BestPerMetric best_per_metric(std::span<const GridCell> cells);

}  // namespace ivfs

#endif  // IVFS_EVAL_HPP
