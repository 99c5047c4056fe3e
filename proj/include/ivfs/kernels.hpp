#ifndef IVFS_KERNELS_HPP
#define IVFS_KERNELS_HPP

#include <cstddef>
#include <span>

namespace ivfs::kernels {

/// Above this many terms squared distances are summed with Neumaier compensation.
inline constexpr std::size_t kCompensatedThreshold = 4096;

inline double squared_distance(const double* a, const double* b, std::size_t cols) noexcept {
  if (cols <= kCompensatedThreshold) {
    double s = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      const double t = a[k] - b[k];
      s += t * t;
    }
    return s;
  }
  double s = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < cols; ++k) {
    const double t = a[k] - b[k];
    const double v = t * t;
    const double u = s + v;
    c += (s >= v) ? (s - u) + v : (v - u) + s;
    s = u;
  }
  return s + c;
}

// Both variants fill the full symmetric rows x rows matrix `out` (row-major)
// with squared Euclidean distances between the rows of the row-major `block`.

namespace serial {
void pairwise_squared(std::span<const double> block, std::size_t rows, std::size_t cols,
                      std::span<double> out);
}

namespace omp {
void pairwise_squared(std::span<const double> block, std::size_t rows, std::size_t cols,
                      std::span<double> out, int threads = 0);
}

}  // namespace ivfs::kernels

#endif  // IVFS_KERNELS_HPP
