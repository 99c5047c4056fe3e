#include "ivfs/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "ivfs/error.hpp"

namespace ivfs {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string_view rest(line);
  while (true) {
    auto comma = rest.find(',');
    cells.emplace_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return cells;
}

}  // namespace

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                       std::vector<std::string> feature_names, bool standardized)
    : rows_(rows),
      cols_(cols),
      values_(std::move(values)),
      feature_names_(std::move(feature_names)),
      standardized_(standardized) {
  if (rows_ < 2) throw InvalidParameter("data matrix needs at least 2 samples");
  if (cols_ < 1) throw InvalidParameter("data matrix needs at least 1 feature");
  if (values_.size() != rows_ * cols_) throw ShapeError("data matrix value count does not match shape");
  if (!feature_names_.empty() && feature_names_.size() != cols_) {
    throw ShapeError("feature name count does not match column count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidParameter("data matrix contains NaN or Inf");
  }
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> out;
  out.reserve(rows.size() * cols_);
  for (std::size_t r : rows) {
    if (r >= rows_) throw InvalidSelection("row index out of range");
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return DataMatrix(rows.size(), cols_, std::move(out), feature_names_, standardized_);
}

DataMatrix DataMatrix::select_features(const FeatureSubset& features) const {
  if (features.feature_count() != cols_) throw ShapeError("feature subset built for a different width");
  std::vector<double> out;
  out.reserve(rows_ * features.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t f : features.indices()) out.push_back(values_[i * cols_ + f]);
  }
  std::vector<std::string> names;
  if (!feature_names_.empty()) {
    for (std::size_t f : features.indices()) names.push_back(feature_names_[f]);
  }
  return DataMatrix(rows_, features.size(), std::move(out), std::move(names), standardized_);
}

DataMatrix DataMatrix::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return DataMatrix(rows_, cols_, std::move(out), feature_names_, false);
}

LabelVector::LabelVector(std::vector<int> labels, int class_count, std::vector<std::string> class_names)
    : labels_(std::move(labels)), class_count_(class_count), class_names_(std::move(class_names)) {
  if (class_count_ < 2) throw InvalidParameter("labels need at least 2 classes");
  for (int l : labels_) {
    if (l < 0 || l >= class_count_) throw InvalidParameter("label outside [0, class_count)");
  }
  if (!class_names_.empty() && class_names_.size() != static_cast<std::size_t>(class_count_)) {
    throw ShapeError("class name count does not match class count");
  }
}

LabelVector LabelVector::from_tokens(std::span<const std::string> tokens) {
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> names;
  std::vector<int> labels;
  labels.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto [it, inserted] = ids.try_emplace(t, static_cast<int>(names.size()));
    if (inserted) names.push_back(t);
    labels.push_back(it->second);
  }
  const int count = static_cast<int>(names.size());
  return LabelVector(std::move(labels), count, std::move(names));
}

LabelVector LabelVector::select(std::span<const std::size_t> rows) const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= labels_.size()) throw InvalidSelection("row index out of range");
    out.push_back(labels_[r]);
  }
  return LabelVector(std::move(out), class_count_, class_names_);
}

LoadedData read_csv(std::istream& in, const std::optional<LabelColumn>& label_column) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    table.push_back(split_row(line));
    line_numbers.push_back(line_no);
  }
  if (table.empty()) throw EmptyInput("CSV input is empty");

  const std::size_t width = table.front().size();
  for (std::size_t r = 1; r < table.size(); ++r) {
    if (table[r].size() != width) {
      throw ParseError("row " + std::to_string(line_numbers[r]) + " has " +
                           std::to_string(table[r].size()) + " cells, expected " + std::to_string(width),
                       line_numbers[r]);
    }
  }

  bool has_header = false;
  for (const auto& cell : table.front()) {
    if (!parse_number(cell)) {
      has_header = true;
      break;
    }
  }

  std::optional<std::size_t> label_index;
  if (label_column) {
    if (const auto* name = std::get_if<std::string>(&*label_column)) {
      if (has_header) {
        for (std::size_t c = 0; c < width; ++c) {
          if (table.front()[c] == *name) label_index = c;
        }
      }
      // A purely numeric name that matches no header cell is a column index.
      const bool digits = !name->empty() && name->find_first_not_of("0123456789") == std::string::npos;
      if (!label_index && digits) label_index = std::stoul(*name);
      if (!label_index && !has_header) throw InvalidParameter("label column by name requires a header row");
      if (!label_index) throw InvalidParameter("label column '" + *name + "' not found in header");
      if (*label_index >= width) throw InvalidParameter("label column index out of range");
    } else {
      label_index = std::get<std::size_t>(*label_column);
      if (*label_index >= width) throw InvalidParameter("label column index out of range");
    }
  }

  const std::size_t first = has_header ? 1 : 0;
  const std::size_t rows = table.size() - first;
  const std::size_t cols = width - (label_index ? 1 : 0);
  if (rows == 0) throw EmptyInput("CSV has a header but no data rows");
  if (cols == 0) throw EmptyInput("CSV has no feature columns");

  std::vector<std::string> names;
  if (has_header) {
    for (std::size_t c = 0; c < width; ++c) {
      if (label_index && c == *label_index) continue;
      names.push_back(table.front()[c]);
    }
  }

  std::vector<double> values;
  values.reserve(rows * cols);
  std::vector<std::string> tokens;
  for (std::size_t r = first; r < table.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (label_index && c == *label_index) {
        tokens.push_back(table[r][c]);
        continue;
      }
      auto v = parse_number(table[r][c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("non-numeric cell '" + table[r][c] + "' at row " +
                             std::to_string(line_numbers[r]) + ", column " + std::to_string(c + 1),
                         line_numbers[r], c + 1);
      }
      values.push_back(*v);
    }
  }

  LoadedData out{DataMatrix(rows, cols, std::move(values), std::move(names)), std::nullopt};
  if (label_index) out.labels = LabelVector::from_tokens(tokens);
  return out;
}

LoadedData load_csv(const std::filesystem::path& path, const std::optional<LabelColumn>& label_column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_csv(in, label_column);
}

void write_csv(std::ostream& out, const DataMatrix& matrix, const LabelVector* labels) {
  if (labels && labels->size() != matrix.rows()) throw ShapeError("label count does not match rows");
  out << std::setprecision(17);
  const auto& names = matrix.feature_names();
  if (!names.empty() || labels) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out << (c ? "," : "");
      if (names.empty()) {
        out << 'f' << c;
      } else {
        out << names[c];
      }
    }
    if (labels) out << ",label";
    out << '\n';
  }
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) out << (j ? "," : "") << matrix(i, j);
    if (labels) {
      const int id = (*labels)[i];
      out << ',';
      if (!labels->class_names().empty()) {
        out << labels->class_names()[static_cast<std::size_t>(id)];
      } else {
        out << "c" << id;
      }
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const DataMatrix& matrix, const LabelVector* labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(out, matrix, labels);
}

DataMatrix standardize(const DataMatrix& matrix) {
  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.cols();
  std::vector<double> out(matrix.values().begin(), matrix.values().end());
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += matrix(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = matrix(i, j) - mean;
      ss += c * c;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    // A column is constant when its spread is lost in rounding of its own magnitude.
    const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    for (std::size_t i = 0; i < n; ++i) {
      out[i * d + j] = constant ? 0.0 : (matrix(i, j) - mean) / sd;
    }
  }
  return DataMatrix(n, d, std::move(out), matrix.feature_names(), true);
}

}  // namespace ivfs
