#ifndef IVFS_FEATURE_SUBSET_HPP
#define IVFS_FEATURE_SUBSET_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ivfs {

/// A non-empty, strictly increasing set of column indices, each below the
/// feature count it was validated against.
class FeatureSubset {
 public:
  /// Throws InvalidSelection unless `indices` is non-empty, sorted, distinct and < `feature_count`.
  FeatureSubset(std::vector<std::size_t> indices, std::size_t feature_count);

  /// Sorts and deduplicates first; still rejects empty input and out-of-range indices.
  static FeatureSubset from_unsorted(std::vector<std::size_t> indices, std::size_t feature_count);
  static FeatureSubset all(std::size_t feature_count);

  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t feature_count() const noexcept { return feature_count_; }
  bool contains(std::size_t feature) const;
  bool is_all() const noexcept { return indices_.size() == feature_count_; }

  bool operator==(const FeatureSubset&) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t feature_count_;
};

}  // namespace ivfs

#endif  // IVFS_FEATURE_SUBSET_HPP
