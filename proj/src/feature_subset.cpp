#include "ivfs/feature_subset.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ivfs/error.hpp"

namespace ivfs {

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices, std::size_t feature_count)
    : indices_(std::move(indices)), feature_count_(feature_count) {
  if (indices_.empty()) throw InvalidSelection("feature subset is empty");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= feature_count_) {
      throw InvalidSelection("feature index " + std::to_string(indices_[i]) +
                             " out of range for " + std::to_string(feature_count_) + " features");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw InvalidSelection("feature subset must be strictly increasing");
    }
  }
}

FeatureSubset FeatureSubset::from_unsorted(std::vector<std::size_t> indices,
                                           std::size_t feature_count) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return FeatureSubset(std::move(indices), feature_count);
}

FeatureSubset FeatureSubset::all(std::size_t feature_count) {
  std::vector<std::size_t> idx(feature_count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return FeatureSubset(std::move(idx), feature_count);
}

bool FeatureSubset::contains(std::size_t feature) const {
  return std::binary_search(indices_.begin(), indices_.end(), feature);
}

}  // namespace ivfs
