#include "ivfs/diagram_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ivfs/assignment.hpp"
#include "ivfs/error.hpp"

namespace ivfs {
namespace {

constexpr double kForbidden = std::numeric_limits<double>::infinity();

void check_single_dim(const PersistenceDiagram& psi, const PersistenceDiagram& gamma) {
  std::set<int> dims;
  for (const auto& b : psi.bars) dims.insert(b.dim);
  for (const auto& b : gamma.bars) dims.insert(b.dim);
  if (dims.size() > 1) {
    throw InvalidParameter("diagram distance needs bars of a single homology dimension");
  }
}

void check_order(double p) {
  if (!(p >= 1.0)) throw InvalidParameter("Wasserstein order p must be >= 1");
}

// Rows: psi bars, then one diagonal slot per gamma bar.
// Columns: gamma bars, then one diagonal slot per psi bar.
std::vector<double> augmented_costs(const PersistenceDiagram& psi, const PersistenceDiagram& gamma,
                                    CostNorm q) {
  const std::size_t m = psi.size();
  const std::size_t k = gamma.size();
  const std::size_t n = m + k;
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      if (i < m && j < k) {
        c = bar_cost(psi.bars[i], gamma.bars[j], q);
      } else if (i < m) {
        c = (j - k == i) ? diagonal_cost(psi.bars[i], q) : kForbidden;
      } else if (j < k) {
        c = (i - m == j) ? diagonal_cost(gamma.bars[j], q) : kForbidden;
      }
      cost[i * n + j] = c;
    }
  }
  return cost;
}

double min_max_matching(const std::vector<double>& cost, std::size_t n) {
  if (n == 0) return 0.0;
  std::vector<double> candidates;
  for (double c : cost) {
    if (std::isfinite(c)) candidates.push_back(c);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<char> allowed(n * n);
  auto feasible = [&](double threshold) {
    for (std::size_t e = 0; e < n * n; ++e) allowed[e] = cost[e] <= threshold;
    return has_perfect_matching(allowed, n);
  };
  // The largest candidate is always feasible (every bar to its diagonal).
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace

double bar_cost(const Bar& x, const Bar& y, CostNorm q) {
  const double db = std::abs(x.birth - y.birth);
  const double dd = std::abs(x.death - y.death);
  switch (q) {
    case CostNorm::L1:
      return db + dd;
    case CostNorm::L2:
      return std::hypot(db, dd);
    case CostNorm::Linf:
      return std::max(db, dd);
  }
  return 0.0;
}

double diagonal_cost(const Bar& x, CostNorm q) {
  const double half = (x.death - x.birth) / 2.0;
  switch (q) {
    case CostNorm::L1:
      return 2.0 * half;
    case CostNorm::L2:
      return std::sqrt(2.0) * half;
    case CostNorm::Linf:
      return half;
  }
  return 0.0;
}

double bottleneck(const PersistenceDiagram& psi, const PersistenceDiagram& gamma) {
  return wasserstein(psi, gamma, kInfiniteOrder, CostNorm::Linf);
}

double wasserstein(const PersistenceDiagram& psi, const PersistenceDiagram& gamma, double p, CostNorm q) {
  check_single_dim(psi, gamma);
  check_order(p);
  const std::size_t n = psi.size() + gamma.size();
  auto cost = augmented_costs(psi, gamma, q);
  if (std::isinf(p)) return min_max_matching(cost, n);
  if (p != 1.0) {
    for (double& c : cost) {
      if (std::isfinite(c)) c = std::pow(c, p);
    }
  }
  const double total = solve_assignment(cost, n).cost;
  return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

double matching_oracle(const PersistenceDiagram& psi, const PersistenceDiagram& gamma, double p, CostNorm q) {
  check_single_dim(psi, gamma);
  check_order(p);
  const std::size_t m = psi.size();
  const std::size_t k = gamma.size();
  const std::size_t n = m + k;
  if (n > kMatchingOracleMaxBars) {
    throw OracleTooLarge("matching oracle limited to " + std::to_string(kMatchingOracleMaxBars) + " bars");
  }
  // Left: psi bars then k diagonal points; right: gamma bars then m diagonal
  // points. Any bar may pair with any diagonal point.
  auto pair_cost = [&](std::size_t i, std::size_t j) {
    const bool left_diag = i >= m;
    const bool right_diag = j >= k;
    if (left_diag && right_diag) return 0.0;
    if (left_diag) return diagonal_cost(gamma.bars[j], q);
    if (right_diag) return diagonal_cost(psi.bars[i], q);
    return bar_cost(psi.bars[i], gamma.bars[j], q);
  };

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double agg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = pair_cost(i, perm[i]);
      agg = std::isinf(p) ? std::max(agg, c) : agg + std::pow(c, p);
    }
    best = std::min(best, agg);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (n == 0) return 0.0;
  return std::isinf(p) ? best : std::pow(best, 1.0 / p);
}

double wasserstein_by_dim(const PersistenceDiagram& psi, const PersistenceDiagram& gamma, double p,
                          CostNorm q) {
  check_order(p);
  std::set<int> dims;
  for (const auto& b : psi.bars) dims.insert(b.dim);
  for (const auto& b : gamma.bars) dims.insert(b.dim);
  double agg = 0.0;
  for (int dim : dims) {
    const double w = wasserstein(psi.of_dim(dim), gamma.of_dim(dim), p, q);
    agg = std::isinf(p) ? std::max(agg, w) : agg + std::pow(w, p);
  }
  return std::isinf(p) ? agg : std::pow(agg, 1.0 / p);
}

double bottleneck_by_dim(const PersistenceDiagram& psi, const PersistenceDiagram& gamma) {
  return wasserstein_by_dim(psi, gamma, kInfiniteOrder, CostNorm::Linf);
}

}  // namespace ivfs
