#include "ivfs/knn.hpp"

#include <algorithm>
#include <limits>

#include "ivfs/error.hpp"
#include "ivfs/kernels.hpp"

namespace ivfs {

int majority_vote(std::span<const int> neighbor_labels, int class_count) {
  std::vector<std::size_t> votes(static_cast<std::size_t>(class_count), 0);
  for (int l : neighbor_labels) ++votes[static_cast<std::size_t>(l)];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<int> knn_classify(std::span<const double> train, std::span<const int> train_labels,
                              std::span<const double> test, std::size_t cols, std::size_t k,
                              int class_count) {
  const std::size_t n_train = train_labels.size();
  if (n_train == 0) throw InvalidParameter("KNN needs at least one training row");
  if (train.size() != n_train * cols) throw ShapeError("training block does not match label count");
  const std::size_t n_test = cols ? test.size() / cols : 0;
  k = std::min(std::max<std::size_t>(k, 1), n_train);

  std::vector<int> predictions(n_test);
  std::vector<std::pair<double, std::size_t>> dist(n_train);
  std::vector<int> neighbors(k);
  for (std::size_t t = 0; t < n_test; ++t) {
    const double* q = test.data() + t * cols;
    for (std::size_t i = 0; i < n_train; ++i) {
      dist[i] = {kernels::squared_distance(q, train.data() + i * cols, cols), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t j = 0; j < k; ++j) neighbors[j] = train_labels[dist[j].second];
    predictions[t] = majority_vote(neighbors, class_count);
  }
  return predictions;
}

double leave_one_out_1nn_error(std::span<const double> block, std::size_t rows, std::size_t cols,
                               std::span<const int> labels) {
  if (rows < 2) throw InvalidParameter("leave-one-out needs at least 2 rows");
  if (labels.size() != rows || block.size() != rows * cols) throw ShapeError("block/label size mismatch");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t j = 0; j < rows; ++j) {
      if (j == i) continue;
      const double s = kernels::squared_distance(block.data() + i * cols, block.data() + j * cols, cols);
      if (s < best) {
        best = s;
        arg = j;
      }
    }
    if (labels[arg] != labels[i]) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(rows);
}

}  // namespace ivfs
