#ifndef IVFS_SYNTHETIC_HPP
#define IVFS_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ivfs/dataset.hpp"
#include "ivfs/engine.hpp"

namespace ivfs::synthetic {

/// Points on a noisy circle seen through `signal` random projections,
/// padded with independent N(0, 1) noise columns. Signal columns are
/// scattered among the noise columns at random positions.
struct InformativeNoiseSpec {
  std::size_t samples = 150;
  std::size_t features = 100;
  std::size_t signal = 10;
  double radius = 20.0;  // scale of the signal columns relative to the unit noise
  double jitter = 0.3;   // per-column noise added to the signal columns
};

struct InformativeNoise {
  DataMatrix matrix;
  LabelVector labels;                       // upper / lower half of the circle
  std::vector<std::size_t> signal_features; // ascending
  std::vector<std::size_t> noise_features;  // ascending
};

InformativeNoise informative_noise(const InformativeNoiseSpec& spec, std::uint64_t seed);

/// n points evenly spaced on a circle of radius 1 (2 columns).
DataMatrix circle(std::size_t n, double jitter = 0.0, std::uint64_t seed = 0);

/// Uniform points in the unit cube.
DataMatrix uniform_cloud(std::size_t n, std::size_t dim, std::uint64_t seed);

/// Subset score that depends only on F ∩ Ω through a monotone set function,
/// so every F ⊆ F' (restricted to Ω) scores no higher. Rows are ignored.
class MonotoneScorer final : public SubsetScorer {
 public:
  MonotoneScorer(std::size_t feature_count, std::vector<std::size_t> omega, std::vector<double> set_values);

  double score(std::span<const std::size_t> features, std::span<const std::size_t> rows) const override;

  std::size_t feature_count() const noexcept { return feature_count_; }
  const std::vector<std::size_t>& omega() const noexcept { return omega_; }
  /// Value of the set function on a bitmask over omega's members.
  double set_value(std::uint64_t mask) const { return set_values_.at(mask); }

 private:
  std::size_t feature_count_;
  std::vector<std::size_t> omega_;
  std::vector<int> omega_slot_;     // feature -> bit in mask, -1 outside omega
  std::vector<double> set_values_;  // 2^|omega| entries, non-decreasing under inclusion
};

/// A random monotone instance: Ω of size `omega_size` chosen uniformly, the
/// set function built from non-negative Möbius weights. Singletons get
/// distinct weights spaced `margin` apart (at least `margin`), higher-order
/// terms are drawn in [0, margin / 5).
MonotoneScorer monotone_instance(std::size_t feature_count, std::size_t omega_size, std::uint64_t seed,
                                 double margin = 0.5);

}  // namespace ivfs::synthetic

#endif  // IVFS_SYNTHETIC_HPP
