#ifndef IVFS_RNG_HPP
#define IVFS_RNG_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace ivfs {

using Rng = std::mt19937_64;

/// Independent generator for (seed, index, stream). std::seed_seq and
/// mt19937_64 are fully specified, so streams agree across platforms.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream};
  return Rng(seq);
}

/// Uniform integer in [0, bound) by multiply-and-reject; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  std::uint64_t x = rng();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// `count` distinct values from [0, population), ascending (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t population,
                                                           std::size_t count) {
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace ivfs

#endif  // IVFS_RNG_HPP
