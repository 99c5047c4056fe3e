#include "ivfs/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "ivfs/error.hpp"

namespace ivfs {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // Roots are always the smallest vertex of their component.
  void attach(std::uint32_t child_root, std::uint32_t parent_root) { parent_[child_root] = parent_root; }

 private:
  std::vector<std::uint32_t> parent_;
};

struct Triangle {
  double value;
  std::uint32_t a, b, c;
};

// Symmetric difference of two ascending index lists.
void add_column(std::vector<std::uint32_t>& col, const std::vector<std::uint32_t>& other,
                std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  col.swap(scratch);
}

}  // namespace

PersistenceDiagram PersistenceDiagram::of_dim(int dim) const {
  PersistenceDiagram out;
  for (const auto& b : bars) {
    if (b.dim == dim) out.bars.push_back(b);
  }
  return out;
}

PersistenceDiagram PersistenceDiagram::sorted() const {
  PersistenceDiagram out{bars};
  std::stable_sort(out.bars.begin(), out.bars.end(), [](const Bar& x, const Bar& y) {
    return std::tie(x.dim, x.birth, x.death) < std::tie(y.dim, y.birth, y.death);
  });
  return out;
}

bool same_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol) {
  if (a.size() != b.size()) return false;
  auto sa = a.sorted();
  auto sb = b.sorted();
  for (std::size_t k = 0; k < sa.size(); ++k) {
    const Bar& x = sa.bars[k];
    const Bar& y = sb.bars[k];
    if (x.dim != y.dim || std::abs(x.birth - y.birth) > tol || std::abs(x.death - y.death) > tol) {
      return false;
    }
  }
  return true;
}

PersistenceDiagram merge(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  PersistenceDiagram out{a.bars};
  out.bars.insert(out.bars.end(), b.bars.begin(), b.bars.end());
  return out;
}

RipsFiltration build_filtration(const DistanceMatrix& d, double alpha_max) {
  if (!(alpha_max > 0.0) || alpha_max > 1.0) {
    throw InvalidParameter("alpha_max must lie in (0, 1]");
  }
  RipsFiltration filt;
  filt.n = d.size();
  filt.alpha_max = alpha_max;
  for (std::uint32_t i = 0; i < filt.n; ++i) {
    for (std::uint32_t j = i + 1; j < filt.n; ++j) {
      const double v = d(i, j);
      if (v <= alpha_max) filt.edges.push_back({i, j, v});
    }
  }
  std::sort(filt.edges.begin(), filt.edges.end(), [](const RipsEdge& x, const RipsEdge& y) {
    return std::tie(x.value, x.i, x.j) < std::tie(y.value, y.i, y.j);
  });
  return filt;
}

PersistenceDiagram persistence_h0(const RipsFiltration& filt) {
  PersistenceDiagram out;
  UnionFind uf(filt.n);
  std::size_t components = filt.n;
  for (const auto& e : filt.edges) {
    const auto ri = uf.find(e.i);
    const auto rj = uf.find(e.j);
    if (ri == rj) continue;
    // Elder rule: the component rooted at the larger vertex index dies.
    uf.attach(std::max(ri, rj), std::min(ri, rj));
    out.bars.push_back({0, 0.0, e.value});
    --components;
  }
  for (std::size_t c = 0; c < components; ++c) out.bars.push_back({0, 0.0, filt.alpha_max});
  return out;
}

PersistenceDiagram persistence_h1(const RipsFiltration& filt) {
  const std::size_t n = filt.n;
  const std::size_t edge_count = filt.edges.size();
  constexpr std::uint32_t kNone = UINT32_MAX;

  // Edges that merge components are negative in H0 and never start a loop.
  std::vector<bool> positive(edge_count, false);
  {
    UnionFind uf(n);
    for (std::size_t e = 0; e < edge_count; ++e) {
      const auto ri = uf.find(filt.edges[e].i);
      const auto rj = uf.find(filt.edges[e].j);
      if (ri == rj) {
        positive[e] = true;
      } else {
        uf.attach(std::max(ri, rj), std::min(ri, rj));
      }
    }
  }

  std::vector<std::uint32_t> edge_id(n * n, kNone);
  std::vector<std::vector<std::uint32_t>> neighbors(n);
  for (std::uint32_t e = 0; e < edge_count; ++e) {
    const auto& ed = filt.edges[e];
    edge_id[ed.i * n + ed.j] = e;
    edge_id[ed.j * n + ed.i] = e;
    neighbors[ed.i].push_back(ed.j);
    neighbors[ed.j].push_back(ed.i);
  }
  for (auto& nb : neighbors) std::sort(nb.begin(), nb.end());

  std::vector<Triangle> triangles;
  for (std::uint32_t a = 0; a < n; ++a) {
    const auto& na = neighbors[a];
    for (auto ib = std::upper_bound(na.begin(), na.end(), a); ib != na.end(); ++ib) {
      const std::uint32_t b = *ib;
      const std::uint32_t eab = edge_id[a * n + b];
      for (auto ic = std::next(ib); ic != na.end(); ++ic) {
        const std::uint32_t c = *ic;
        const std::uint32_t ebc = edge_id[b * n + c];
        if (ebc == kNone) continue;
        const std::uint32_t eac = edge_id[a * n + c];
        // Edge ids follow filtration order, so the latest edge carries the max value.
        const std::uint32_t last = std::max({eab, eac, ebc});
        triangles.push_back({filt.edges[last].value, a, b, c});
      }
    }
  }
  std::sort(triangles.begin(), triangles.end(), [](const Triangle& x, const Triangle& y) {
    return std::tie(x.value, x.a, x.b, x.c) < std::tie(y.value, y.a, y.b, y.c);
  });

  PersistenceDiagram out;
  std::vector<std::vector<std::uint32_t>> reduced(edge_count);
  std::vector<bool> paired(edge_count, false);
  std::vector<std::uint32_t> col;
  std::vector<std::uint32_t> scratch;
  for (const auto& t : triangles) {
    col = {edge_id[t.a * n + t.b], edge_id[t.a * n + t.c], edge_id[t.b * n + t.c]};
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      const std::uint32_t pivot = col.back();
      if (!paired[pivot]) {
        paired[pivot] = true;
        if (t.value > filt.edges[pivot].value) out.bars.push_back({1, filt.edges[pivot].value, t.value});
        reduced[pivot] = col;
        break;
      }
      add_column(col, reduced[pivot], scratch);
    }
  }
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (positive[e] && !paired[e] && filt.edges[e].value < filt.alpha_max) {
      out.bars.push_back({1, filt.edges[e].value, filt.alpha_max});
    }
  }
  return out;
}

PersistenceDiagram rips_persistence(const RipsFiltration& filt) {
  return merge(persistence_h0(filt), persistence_h1(filt));
}

PersistenceDiagram threshold_diagram(const PersistenceDiagram& diag, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidParameter("epsilon must be non-negative");
  PersistenceDiagram out;
  for (const auto& b : diag.bars) {
    if (b.death - b.birth >= epsilon - kLifetimeSlack) out.bars.push_back(b);
  }
  return out;
}

void write_diagram(std::ostream& out, const PersistenceDiagram& diag) {
  out << std::setprecision(17);
  for (const auto& b : diag.sorted().bars) out << b.dim << ' ' << b.birth << ' ' << b.death << '\n';
}

PersistenceDiagram read_diagram(std::istream& in) {
  PersistenceDiagram out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Bar b;
    if (!(ls >> b.dim >> b.birth >> b.death)) throw ParseError("malformed diagram line", line_no);
    if (b.dim < 0 || b.death < b.birth) throw ParseError("invalid bar", line_no);
    out.bars.push_back(b);
  }
  return out;
}

}  // namespace ivfs
