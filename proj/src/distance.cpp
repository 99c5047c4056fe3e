#include "ivfs/distance.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "ivfs/error.hpp"
#include "ivfs/kernels.hpp"

namespace ivfs {
namespace {

void check_same_size(const DistanceMatrix& a, const DistanceMatrix& b) {
  if (a.size() != b.size()) {
    throw ShapeError("distance matrices have different sizes: " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
}

// Gathers the selected rows/features into a contiguous row-major block.
std::vector<double> gather(const DataMatrix& x, std::span<const std::size_t> rows,
                           std::span<const std::size_t> features) {
  std::vector<double> block;
  block.reserve(rows.size() * features.size());
  for (std::size_t r : rows) {
    auto src = x.row(r);
    for (std::size_t f : features) block.push_back(src[f]);
  }
  return block;
}

}  // namespace

DistanceMatrix DistanceMatrix::from_entries(std::size_t n, std::vector<double> entries, double normalizer) {
  if (entries.size() != n * n) throw ShapeError("distance matrix entry count is not n^2");
  if (n < 2) throw InvalidSelection("distance matrix needs at least 2 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (entries[i * n + i] != 0.0) throw InvalidParameter("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = entries[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidParameter("distance entries must lie in [0, 1]");
      if (v != entries[j * n + i]) throw InvalidParameter("distance matrix must be symmetric");
    }
  }
  return DistanceMatrix(n, std::move(entries), normalizer);
}

DistanceMatrix DistanceMatrix::from_raw(std::size_t n, std::vector<double> raw,
                                        std::optional<double> normalizer) {
  if (raw.size() != n * n) throw ShapeError("distance matrix entry count is not n^2");
  if (n < 2) throw InvalidSelection("distance matrix needs at least 2 points");
  const double scale = normalizer ? *normalizer : *std::max_element(raw.begin(), raw.end());
  if (scale > 0.0) {
    for (double& v : raw) v /= scale;
  } else {
    std::fill(raw.begin(), raw.end(), 0.0);
  }
  for (double& v : raw) {
    if (v > 1.0 + 1e-12) throw InvalidParameter("normalized distance exceeds 1; normalizer too small");
    v = std::min(v, 1.0);
  }
  return DistanceMatrix(n, std::move(raw), scale > 0.0 ? scale : 0.0);
}

std::vector<double> raw_distances(const DataMatrix& x, const Selection& selection, Parallelism par) {
  std::vector<std::size_t> rows;
  if (selection.rows) {
    rows = *selection.rows;
    for (std::size_t r : rows) {
      if (r >= x.rows()) throw InvalidSelection("row index " + std::to_string(r) + " out of range");
    }
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidSelection("row selection contains duplicates");
    }
  }
  const std::size_t m = selection.rows ? rows.size() : x.rows();
  if (m < 2) throw InvalidSelection("distance matrix needs at least 2 rows");
  if (selection.features && selection.features->feature_count() != x.cols()) {
    throw InvalidSelection("feature subset built for a different width");
  }

  std::vector<double> gathered;
  std::span<const double> block;
  std::size_t cols = x.cols();
  if (!selection.rows && (!selection.features || selection.features->is_all())) {
    block = x.values();
  } else {
    if (!selection.rows) {
      rows.resize(x.rows());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    const auto all = FeatureSubset::all(x.cols());
    const auto& features = selection.features ? *selection.features : all;
    gathered = gather(x, rows, features.indices());
    block = gathered;
    cols = features.size();
  }

  std::vector<double> out(m * m);
  if (par.mode == Execution::Serial) {
    kernels::serial::pairwise_squared(block, m, cols, out);
  } else {
    kernels::omp::pairwise_squared(block, m, cols, out, par.threads);
  }
  for (double& v : out) v = std::sqrt(v);
  return out;
}

DistanceMatrix distance_matrix(const DataMatrix& x, const Selection& selection, Parallelism par) {
  auto raw = raw_distances(x, selection, par);
  const std::size_t m = selection.rows ? selection.rows->size() : x.rows();
  return DistanceMatrix::from_raw(m, std::move(raw));
}

double norm_linf(const DistanceMatrix& a, const DistanceMatrix& b) {
  check_same_size(a, b);
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

double norm_l1(const DistanceMatrix& a, const DistanceMatrix& b) {
  check_same_size(a, b);
  double s = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += std::abs(ea[k] - eb[k]);
  return s;
}

double norm_l2(const DistanceMatrix& a, const DistanceMatrix& b) {
  check_same_size(a, b);
  double s = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) {
    const double t = ea[k] - eb[k];
    s += t * t;
  }
  return std::sqrt(s);
}

SquaredDistanceAccumulator::SquaredDistanceAccumulator(const DataMatrix& x,
                                                       std::span<const std::size_t> rows)
    : m_(rows.empty() ? x.rows() : rows.size()), d_(x.cols()), pairs_(m_ * (m_ - 1) / 2) {
  if (m_ < 2) throw InvalidSelection("accumulator needs at least 2 rows");
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  if (idx.empty()) {
    idx.resize(x.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  }
  for (std::size_t r : idx) {
    if (r >= x.rows()) throw InvalidSelection("row index out of range");
  }
  terms_.resize(d_ * pairs_);
  for (std::size_t i = 0; i < m_; ++i) {
    auto ri = x.row(idx[i]);
    for (std::size_t j = i + 1; j < m_; ++j) {
      auto rj = x.row(idx[j]);
      const std::size_t p = pair_index(i, j);
      for (std::size_t f = 0; f < d_; ++f) {
        const double t = ri[f] - rj[f];
        terms_[f * pairs_ + p] = t * t;
      }
    }
  }
}

std::size_t SquaredDistanceAccumulator::pair_index(std::size_t i, std::size_t j) const noexcept {
  if (i > j) std::swap(i, j);
  // Row-major index into the strict upper triangle.
  return i * m_ - i * (i + 1) / 2 + (j - i - 1);
}

double SquaredDistanceAccumulator::contribution(std::size_t feature, std::size_t i, std::size_t j) const {
  if (feature >= d_ || i >= m_ || j >= m_) throw InvalidSelection("accumulator index out of range");
  if (i == j) return 0.0;
  return terms_[feature * pairs_ + pair_index(i, j)];
}

std::vector<double> SquaredDistanceAccumulator::squared(std::span<const std::size_t> features) const {
  if (features.empty()) throw InvalidSelection("empty feature set for accumulation");
  std::vector<double> upper(pairs_, 0.0);
  for (std::size_t f : features) {
    if (f >= d_) throw InvalidSelection("feature index out of range");
    const double* t = terms_.data() + f * pairs_;
    for (std::size_t p = 0; p < pairs_; ++p) upper[p] += t[p];
  }
  std::vector<double> out(m_ * m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = i + 1; j < m_; ++j) {
      const double v = upper[pair_index(i, j)];
      out[i * m_ + j] = v;
      out[j * m_ + i] = v;
    }
  }
  return out;
}

DistanceMatrix SquaredDistanceAccumulator::accumulate(std::span<const std::size_t> features,
                                                      std::optional<double> normalizer) const {
  auto sq = squared(features);
  for (double& v : sq) v = std::sqrt(v);
  return DistanceMatrix::from_raw(m_, std::move(sq), normalizer);
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& d) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) out << (j ? "," : "") << d(i, j);
    out << '\n';
  }
}

}  // namespace ivfs
