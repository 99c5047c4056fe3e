#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "ivfs/error.hpp"
#include "ivfs/persistence.hpp"

namespace ivfs {
namespace {

struct Simplex {
  double value;
  int dim;
  std::vector<std::uint32_t> vertices;
};

using Column = std::vector<std::uint64_t>;

int low(const Column& col) {
  for (std::size_t w = col.size(); w-- > 0;) {
    if (col[w]) return static_cast<int>(w * 64 + 63 - std::countl_zero(col[w]));
  }
  return -1;
}

}  // namespace

PersistenceDiagram persistence_oracle(const RipsFiltration& filt, int max_dim) {
  if (filt.n > kOracleMaxPoints) {
    throw OracleTooLarge("persistence oracle limited to " + std::to_string(kOracleMaxPoints) + " points");
  }
  if (max_dim < 0) throw InvalidParameter("max_dim must be non-negative");
  const std::size_t n = filt.n;

  std::vector<double> weight(n * n, -1.0);
  for (const auto& e : filt.edges) {
    weight[e.i * n + e.j] = e.value;
    weight[e.j * n + e.i] = e.value;
  }

  // Every clique with at most max_dim + 2 vertices, built by extending
  // vertex lists with larger indices.
  std::vector<Simplex> simplices;
  std::vector<Simplex> frontier;
  for (std::uint32_t v = 0; v < n; ++v) frontier.push_back({0.0, 0, {v}});
  for (int dim = 0; dim <= max_dim + 1 && !frontier.empty(); ++dim) {
    std::vector<Simplex> next;
    for (const auto& s : frontier) {
      for (std::uint32_t v = s.vertices.back() + 1; v < n; ++v) {
        double value = s.value;
        bool clique = true;
        for (auto u : s.vertices) {
          const double w = weight[u * n + v];
          if (w < 0.0) {
            clique = false;
            break;
          }
          value = std::max(value, w);
        }
        if (!clique) continue;
        auto verts = s.vertices;
        verts.push_back(v);
        next.push_back({value, dim + 1, std::move(verts)});
      }
    }
    simplices.insert(simplices.end(), frontier.begin(), frontier.end());
    frontier = std::move(next);
  }

  std::sort(simplices.begin(), simplices.end(), [](const Simplex& x, const Simplex& y) {
    return std::tie(x.value, x.dim, x.vertices) < std::tie(y.value, y.dim, y.vertices);
  });

  const std::size_t count = simplices.size();
  const std::size_t words = (count + 63) / 64;
  std::vector<Column> columns(count, Column(words, 0));
  for (std::size_t j = 0; j < count; ++j) {
    const auto& s = simplices[j];
    if (s.dim == 0) continue;
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      std::vector<std::uint32_t> face;
      for (std::size_t k = 0; k < s.vertices.size(); ++k) {
        if (k != drop) face.push_back(s.vertices[k]);
      }
      for (std::size_t i = 0; i < j; ++i) {
        if (simplices[i].vertices == face) {
          columns[j][i / 64] |= std::uint64_t{1} << (i % 64);
          break;
        }
      }
    }
  }

  std::vector<int> lows(count, -1);
  for (std::size_t j = 0; j < count; ++j) {
    while (true) {
      const int l = low(columns[j]);
      if (l < 0) break;
      std::size_t partner = j;
      for (std::size_t k = 0; k < j; ++k) {
        if (lows[k] == l) {
          partner = k;
          break;
        }
      }
      if (partner == j) break;
      for (std::size_t w = 0; w < words; ++w) columns[j][w] ^= columns[partner][w];
    }
    lows[j] = low(columns[j]);
  }

  PersistenceDiagram out;
  std::vector<bool> is_low(count, false);
  for (std::size_t j = 0; j < count; ++j) {
    if (lows[j] < 0) continue;
    const auto& birth = simplices[static_cast<std::size_t>(lows[j])];
    is_low[static_cast<std::size_t>(lows[j])] = true;
    if (birth.dim > max_dim) continue;
    if (birth.dim > 0 && simplices[j].value <= birth.value) continue;
    out.bars.push_back({birth.dim, birth.value, simplices[j].value});
  }
  for (std::size_t j = 0; j < count; ++j) {
    const auto& s = simplices[j];
    if (lows[j] < 0 && !is_low[j] && s.dim <= max_dim && (s.dim == 0 || s.value < filt.alpha_max)) {
      out.bars.push_back({s.dim, s.value, filt.alpha_max});
    }
  }
  return out;
}

}  // namespace ivfs
