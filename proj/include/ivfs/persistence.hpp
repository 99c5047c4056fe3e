#ifndef IVFS_PERSISTENCE_HPP
#define IVFS_PERSISTENCE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ivfs/distance.hpp"

namespace ivfs {

struct Bar {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;

  double lifetime() const noexcept { return death - birth; }
  bool operator==(const Bar&) const = default;
};

/// Multiset of bars. Essential classes are reported with death = alpha_max.
struct PersistenceDiagram {
  std::vector<Bar> bars;

  std::size_t size() const noexcept { return bars.size(); }
  bool empty() const noexcept { return bars.empty(); }
  /// Bars of one homology dimension, insertion order kept.
  PersistenceDiagram of_dim(int dim) const;
  /// Canonical order: (dim, birth, death), stable.
  PersistenceDiagram sorted() const;
};

/// Multiset equality with a per-coordinate tolerance.
bool same_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol = 0.0);

PersistenceDiagram merge(const PersistenceDiagram& a, const PersistenceDiagram& b);

struct RipsEdge {
  std::uint32_t i;
  std::uint32_t j;  // i < j
  double value;
};

/// Edges of the Rips complex up to alpha_max, ordered by (value, i, j).
struct RipsFiltration {
  std::size_t n = 0;
  std::vector<RipsEdge> edges;
  double alpha_max = 1.0;
};

/// Throws InvalidParameter unless 0 < alpha_max <= 1.
RipsFiltration build_filtration(const DistanceMatrix& d, double alpha_max);

/// Union-find over edges in filtration order. The component whose smallest
/// vertex index is larger dies at a merge. Survivors get (0, 0, alpha_max).
PersistenceDiagram persistence_h0(const RipsFiltration& filt);

/// Column reduction of the edge/triangle boundary matrix. Triangles take the
/// largest value of their edges and are ordered by (value, a, b, c).
/// Unpaired cycle-creating edges get death = alpha_max. Bars of zero length
/// (a cycle filled the moment it appears) are not reported.
PersistenceDiagram persistence_h1(const RipsFiltration& filt);

/// persistence_h0 and persistence_h1 concatenated.
PersistenceDiagram rips_persistence(const RipsFiltration& filt);

/// Slack on the lifetime comparison so a bar such as (0.2, 0.3) counts as 0.1 long.
inline constexpr double kLifetimeSlack = 1e-12;

/// Keeps bars with death - birth >= epsilon. Throws InvalidParameter for epsilon < 0.
PersistenceDiagram threshold_diagram(const PersistenceDiagram& diag, double epsilon);

/// Brute-force reference: dense reduction of the full boundary matrix
/// (vertices, edges, triangles, ...) up to dimension max_dim + 1.
/// Zero-length bars are dropped above dimension 0, as in persistence_h1.
/// Throws OracleTooLarge for n > 16.
PersistenceDiagram persistence_oracle(const RipsFiltration& filt, int max_dim);

inline constexpr std::size_t kOracleMaxPoints = 16;

/// One bar per line, "dim birth death", 17 significant digits, canonical order.
void write_diagram(std::ostream& out, const PersistenceDiagram& diag);
PersistenceDiagram read_diagram(std::istream& in);

}  // namespace ivfs

#endif  // IVFS_PERSISTENCE_HPP
