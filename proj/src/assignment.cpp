#include "ivfs/assignment.hpp"

#include <cmath>
#include <limits>

#include "ivfs/error.hpp"

namespace ivfs {

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw ShapeError("assignment cost matrix is not square");
  Assignment out;
  out.row_to_col.assign(n, 0);
  if (n == 0) return out;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based arrays; index 0 is the virtual source column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double c = cost[(i0 - 1) * n + (j - 1)];
        const double cur = std::isinf(c) ? kInf : c - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0 || std::isinf(delta)) throw InvalidParameter("assignment has no finite perfect matching");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) out.row_to_col[match[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) out.cost += cost[i * n + out.row_to_col[i]];
  return out;
}

namespace {

bool augment(std::size_t row, const std::vector<char>& allowed, std::size_t n,
             std::vector<std::size_t>& col_owner, std::vector<char>& seen) {
  for (std::size_t j = 0; j < n; ++j) {
    if (!allowed[row * n + j] || seen[j]) continue;
    seen[j] = 1;
    if (col_owner[j] == n || augment(col_owner[j], allowed, n, col_owner, seen)) {
      col_owner[j] = row;
      return true;
    }
  }
  return false;
}

}  // namespace

bool has_perfect_matching(const std::vector<char>& allowed, std::size_t n) {
  std::vector<std::size_t> col_owner(n, n);
  std::vector<char> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(i, allowed, n, col_owner, seen)) return false;
  }
  return true;
}

}  // namespace ivfs
