#include <omp.h>

#include <cstdint>

#include "ivfs/kernels.hpp"

namespace ivfs::kernels::omp {

void pairwise_squared(std::span<const double> block, std::size_t rows, std::size_t cols,
                      std::span<double> out, int threads) {
  const double* data = block.data();
  const auto n = static_cast<std::int64_t>(rows);
  const int team = threads > 0 ? threads : omp_get_max_threads();
  // Row i owns the upper-triangle entries (i, j > i); work shrinks with i, hence dynamic.
#pragma omp parallel for schedule(dynamic, 8) num_threads(team)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out[ui * rows + ui] = 0.0;
    for (std::size_t j = ui + 1; j < rows; ++j) {
      const double s = squared_distance(data + ui * cols, data + j * cols, cols);
      out[ui * rows + j] = s;
      out[j * rows + ui] = s;
    }
  }
}

}  // namespace ivfs::kernels::omp
