#ifndef IVFS_DISTANCE_HPP
#define IVFS_DISTANCE_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ivfs/dataset.hpp"
#include "ivfs/execution.hpp"
#include "ivfs/feature_subset.hpp"

namespace ivfs {

/// Symmetric n x n Euclidean distances scaled into [0, 1].
///
/// `normalizer` is the raw distance the entries were divided by. It is 0 when
/// every point coincides, in which case all entries are 0.
class DistanceMatrix {
 public:
  /// Validates symmetry, a zero diagonal and entries in [0, 1].
  static DistanceMatrix from_entries(std::size_t n, std::vector<double> entries, double normalizer = 1.0);

  /// Divides raw (non-squared) distances by `normalizer`, or by their own
  /// maximum when none is given. Entries above 1 after division are rejected.
  static DistanceMatrix from_raw(std::size_t n, std::vector<double> raw,
                                 std::optional<double> normalizer = std::nullopt);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }
  double normalizer() const noexcept { return normalizer_; }

 private:
  DistanceMatrix(std::size_t n, std::vector<double> entries, double normalizer)
      : n_(n), entries_(std::move(entries)), normalizer_(normalizer) {}

  std::size_t n_;
  std::vector<double> entries_;
  double normalizer_;
};

/// Optional restriction of a distance computation to some rows and/or features.
struct Selection {
  std::optional<std::vector<std::size_t>> rows;
  std::optional<FeatureSubset> features;
};

/// Raw (un-normalized) Euclidean distances over the selection, full n x n.
std::vector<double> raw_distances(const DataMatrix& x, const Selection& selection = {},
                                  Parallelism par = {});

/// Normalized distance matrix over the selected rows and features. The
/// selected block is gathered first, so the result equals the one computed on
/// the physically extracted submatrix. Throws InvalidSelection for < 2 rows.
DistanceMatrix distance_matrix(const DataMatrix& x, const Selection& selection = {},
                               Parallelism par = {});

/// max |A_ij - B_ij|. Throws ShapeError on size mismatch.
double norm_linf(const DistanceMatrix& a, const DistanceMatrix& b);
/// sum over all n^2 ordered entries of |A_ij - B_ij|.
double norm_l1(const DistanceMatrix& a, const DistanceMatrix& b);
/// Frobenius norm of A - B.
double norm_l2(const DistanceMatrix& a, const DistanceMatrix& b);

/// Per-feature squared differences g_f(i, j) = (x_if - x_jf)^2 for one fixed
/// row sample, so that D_F for many subsets F is a sum of stored terms.
///
/// Memory is d * m(m-1)/2 doubles for m rows.
class SquaredDistanceAccumulator {
 public:
  /// An empty `rows` means every row of `x`.
  SquaredDistanceAccumulator(const DataMatrix& x, std::span<const std::size_t> rows = {});

  std::size_t size() const noexcept { return m_; }
  std::size_t feature_count() const noexcept { return d_; }
  double contribution(std::size_t feature, std::size_t i, std::size_t j) const;

  /// Raw squared distances over `features`, full m x m. Throws InvalidSelection when empty.
  std::vector<double> squared(std::span<const std::size_t> features) const;
  /// Normalized distances over `features` (own-max, or `normalizer` if given).
  DistanceMatrix accumulate(std::span<const std::size_t> features,
                            std::optional<double> normalizer = std::nullopt) const;

 private:
  std::size_t pair_index(std::size_t i, std::size_t j) const noexcept;

  std::size_t m_;
  std::size_t d_;
  std::size_t pairs_;
  std::vector<double> terms_;  // feature-major: terms_[f * pairs_ + p]
};

/// Dense debug dump: row-major, comma separated, no header.
void write_distance_csv(std::ostream& out, const DistanceMatrix& d);

}  // namespace ivfs

#endif  // IVFS_DISTANCE_HPP
