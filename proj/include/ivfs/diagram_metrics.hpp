#ifndef IVFS_DIAGRAM_METRICS_HPP
#define IVFS_DIAGRAM_METRICS_HPP

#include <cstddef>
#include <limits>

#include "ivfs/persistence.hpp"

namespace ivfs {

/// Ground norm used to measure the displacement between two bars.
enum class CostNorm { L1, L2, Linf };

inline constexpr double kInfiniteOrder = std::numeric_limits<double>::infinity();

/// ||(b1 - b2, d1 - d2)||_q.
double bar_cost(const Bar& x, const Bar& y, CostNorm q);
/// Distance from a bar to its nearest diagonal point under the l_q norm:
/// (d - b) for q = 1, (d - b) / sqrt(2) for q = 2, (d - b) / 2 for q = inf.
double diagonal_cost(const Bar& x, CostNorm q);

/// Bottleneck distance w_inf. Every bar may alternatively be matched to the
/// diagonal. Exact: binary search over the finite set of pair costs with a
/// perfect-matching test. Throws InvalidParameter if the bars span several
/// homology dimensions.
double bottleneck(const PersistenceDiagram& psi, const PersistenceDiagram& gamma);

/// Wasserstein distance w_p^q, solved exactly as an assignment problem on the
/// diagonal-augmented cost matrix. p = kInfiniteOrder gives the min-max
/// matching under the l_q ground norm.
double wasserstein(const PersistenceDiagram& psi, const PersistenceDiagram& gamma, double p, CostNorm q);

/// Exhaustive minimum over all bijections of the augmented diagrams.
/// Throws OracleTooLarge when |psi| + |gamma| > kMatchingOracleMaxBars.
double matching_oracle(const PersistenceDiagram& psi, const PersistenceDiagram& gamma, double p, CostNorm q);

inline constexpr std::size_t kMatchingOracleMaxBars = 8;

/// Diagrams that mix dimensions: per-dimension distances combined as
/// (sum_k W_k^p)^(1/p), or the maximum when p is infinite.
double wasserstein_by_dim(const PersistenceDiagram& psi, const PersistenceDiagram& gamma, double p,
                          CostNorm q);
double bottleneck_by_dim(const PersistenceDiagram& psi, const PersistenceDiagram& gamma);

}  // namespace ivfs

#endif  // IVFS_DIAGRAM_METRICS_HPP
