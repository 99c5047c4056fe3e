#include "ivfs/kernels.hpp"

namespace ivfs::kernels::serial {

void pairwise_squared(std::span<const double> block, std::size_t rows, std::size_t cols,
                      std::span<double> out) {
  const double* data = block.data();
  for (std::size_t i = 0; i < rows; ++i) {
    out[i * rows + i] = 0.0;
    for (std::size_t j = i + 1; j < rows; ++j) {
      const double s = squared_distance(data + i * cols, data + j * cols, cols);
      out[i * rows + j] = s;
      out[j * rows + i] = s;
    }
  }
}

}  // namespace ivfs::kernels::serial
