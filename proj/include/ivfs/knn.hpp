#ifndef IVFS_KNN_HPP
#define IVFS_KNN_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ivfs {

/// Majority label among `neighbor_labels`; ties go to the smallest class id.
int majority_vote(std::span<const int> neighbor_labels, int class_count);

/// K-nearest-neighbor predictions for each test row. Rows are row-major
/// blocks with `cols` columns. Neighbors are ordered by (distance, train
/// index); K is clamped to the training size.
std::vector<int> knn_classify(std::span<const double> train, std::span<const int> train_labels,
                              std::span<const double> test, std::size_t cols, std::size_t k,
                              int class_count);

/// Leave-one-out 1-NN error rate on a row-major block. Ties in distance go to
/// the smaller row index.
double leave_one_out_1nn_error(std::span<const double> block, std::size_t rows, std::size_t cols,
                               std::span<const int> labels);

}  // namespace ivfs

#endif  // IVFS_KNN_HPP
