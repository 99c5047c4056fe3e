#ifndef IVFS_DATASET_HPP
#define IVFS_DATASET_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ivfs/feature_subset.hpp"

namespace ivfs {

/// Dense n x d sample matrix, row-major. Immutable once built.
///
/// Construction rejects n < 2, d < 1 and any non-finite entry.
class DataMatrix {
 public:
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
             std::vector<std::string> feature_names = {}, bool standardized = false);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  bool standardized() const noexcept { return standardized_; }

  DataMatrix select_rows(std::span<const std::size_t> rows) const;
  DataMatrix select_features(const FeatureSubset& features) const;
  DataMatrix scaled(double factor) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::string> feature_names_;
  bool standardized_;
};

/// Dense class ids in [0, class_count), class_count >= 2.
class LabelVector {
 public:
  LabelVector(std::vector<int> labels, int class_count, std::vector<std::string> class_names = {});

  /// Encodes arbitrary tokens as dense ids in first-appearance order.
  static LabelVector from_tokens(std::span<const std::string> tokens);

  std::span<const int> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  int operator[](std::size_t i) const noexcept { return labels_[i]; }
  int class_count() const noexcept { return class_count_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  LabelVector select(std::span<const std::size_t> rows) const;

 private:
  std::vector<int> labels_;
  int class_count_;
  std::vector<std::string> class_names_;
};

/// Which column of a CSV holds labels: a header name or a 0-based index.
using LabelColumn = std::variant<std::string, std::size_t>;

struct LoadedData {
  DataMatrix matrix;
  std::optional<LabelVector> labels;
};

/// Reads a comma-separated table. The first row is a header iff any of its
/// cells fails to parse as a number. Throws ParseError / EmptyInput.
LoadedData load_csv(const std::filesystem::path& path,
                    const std::optional<LabelColumn>& label_column = std::nullopt);
LoadedData read_csv(std::istream& in, const std::optional<LabelColumn>& label_column = std::nullopt);

/// Writes 17-significant-digit values. A header is emitted when feature names
/// are present or labels are written (unnamed features become f0, f1, ...).
void write_csv(const std::filesystem::path& path, const DataMatrix& matrix,
               const LabelVector* labels = nullptr);
void write_csv(std::ostream& out, const DataMatrix& matrix, const LabelVector* labels = nullptr);

/// Column-wise z-scores with the n-1 divisor. Constant columns become zeros.
DataMatrix standardize(const DataMatrix& matrix);

}  // namespace ivfs

#endif  // IVFS_DATASET_HPP
