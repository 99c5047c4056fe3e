#ifndef IVFS_ASSIGNMENT_HPP
#define IVFS_ASSIGNMENT_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ivfs {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

/// Exact minimum-cost perfect matching on a square row-major cost matrix
/// (shortest augmenting paths with potentials, O(n^3)). Entries may be
/// +infinity to forbid a pair; a perfect matching must still exist.
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

/// True when the bipartite graph whose edges are `allowed[i * n + j]` has a
/// perfect matching (augmenting paths).
bool has_perfect_matching(const std::vector<char>& allowed, std::size_t n);

}  // namespace ivfs

#endif  // IVFS_ASSIGNMENT_HPP
