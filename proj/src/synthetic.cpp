#include "ivfs/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "ivfs/error.hpp"
#include "ivfs/rng.hpp"

namespace ivfs::synthetic {

InformativeNoise informative_noise(const InformativeNoiseSpec& spec, std::uint64_t seed) {
  if (spec.signal == 0 || spec.signal > spec.features) throw InvalidParameter("signal count out of range");
  auto rng = make_stream(seed, 0, 7);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t n = spec.samples;
  const std::size_t d = spec.features;
  std::vector<double> angle(n);
  for (auto& a : angle) a = 2.0 * std::numbers::pi * uniform_unit(rng);

  std::vector<double> dir_x(spec.signal), dir_y(spec.signal);
  for (std::size_t s = 0; s < spec.signal; ++s) {
    const double phi = 2.0 * std::numbers::pi * uniform_unit(rng);
    dir_x[s] = std::cos(phi);
    dir_y[s] = std::sin(phi);
  }

  auto columns = sample_without_replacement(rng, d, spec.signal);
  std::vector<int> signal_slot(d, -1);
  for (std::size_t s = 0; s < columns.size(); ++s) signal_slot[columns[s]] = static_cast<int>(s);

  std::vector<double> values(n * d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = std::cos(angle[i]);
    const double cy = std::sin(angle[i]);
    labels[i] = angle[i] < std::numbers::pi ? 0 : 1;
    for (std::size_t j = 0; j < d; ++j) {
      const int s = signal_slot[j];
      if (s >= 0) {
        const auto u = static_cast<std::size_t>(s);
        values[i * d + j] = spec.radius * (dir_x[u] * cx + dir_y[u] * cy) + spec.jitter * normal(rng);
      } else {
        values[i * d + j] = normal(rng);
      }
    }
  }

  InformativeNoise out{DataMatrix(n, d, std::move(values)), LabelVector(std::move(labels), 2), columns, {}};
  for (std::size_t j = 0; j < d; ++j) {
    if (signal_slot[j] < 0) out.noise_features.push_back(j);
  }
  return out;
}

DataMatrix circle(std::size_t n, double jitter, std::uint64_t seed) {
  auto rng = make_stream(seed, 0, 11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    values[2 * i] = std::cos(a) + (jitter > 0.0 ? jitter * normal(rng) : 0.0);
    values[2 * i + 1] = std::sin(a) + (jitter > 0.0 ? jitter * normal(rng) : 0.0);
  }
  return DataMatrix(n, 2, std::move(values));
}

DataMatrix uniform_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  auto rng = make_stream(seed, 0, 13);
  std::vector<double> values(n * dim);
  for (auto& v : values) v = uniform_unit(rng);
  return DataMatrix(n, dim, std::move(values));
}

MonotoneScorer::MonotoneScorer(std::size_t feature_count, std::vector<std::size_t> omega,
                               std::vector<double> set_values)
    : feature_count_(feature_count),
      omega_(std::move(omega)),
      omega_slot_(feature_count, -1),
      set_values_(std::move(set_values)) {
  if (omega_.empty() || omega_.size() > 20) throw InvalidParameter("omega size must lie in [1, 20]");
  if (set_values_.size() != (std::size_t{1} << omega_.size())) {
    throw ShapeError("set function needs 2^|omega| values");
  }
  for (std::size_t s = 0; s < omega_.size(); ++s) {
    if (omega_[s] >= feature_count_) throw InvalidParameter("omega member out of range");
    omega_slot_[omega_[s]] = static_cast<int>(s);
  }
}

double MonotoneScorer::score(std::span<const std::size_t> features, std::span<const std::size_t>) const {
  std::uint64_t mask = 0;
  for (std::size_t f : features) {
    const int s = omega_slot_.at(f);
    if (s >= 0) mask |= std::uint64_t{1} << s;
  }
  // Shifted so the best subset (Ω itself) scores 0.
  return set_values_[mask] - set_values_.back();
}

MonotoneScorer monotone_instance(std::size_t feature_count, std::size_t omega_size, std::uint64_t seed,
                                 double margin) {
  if (omega_size < 1 || omega_size > std::min<std::size_t>(feature_count, 20)) {
    throw InvalidParameter("omega size out of range");
  }
  auto rng = make_stream(seed, 0, 17);
  auto omega = sample_without_replacement(rng, feature_count, omega_size);

  // Distinct singleton weights margin, 2 margin, ... in random order.
  std::vector<double> singleton(omega_size);
  for (std::size_t s = 0; s < omega_size; ++s) singleton[s] = margin * static_cast<double>(s + 1);
  for (std::size_t s = omega_size; s > 1; --s) {
    std::swap(singleton[s - 1], singleton[uniform_below(rng, s)]);
  }

  const std::size_t masks = std::size_t{1} << omega_size;
  std::vector<double> mobius(masks, 0.0);
  for (std::size_t mask = 1; mask < masks; ++mask) {
    if ((mask & (mask - 1)) == 0) {
      mobius[mask] = singleton[static_cast<std::size_t>(std::countr_zero(mask))];
    } else {
      mobius[mask] = 0.2 * margin * uniform_unit(rng);
    }
  }
  // h(S) = sum of Möbius weights over non-empty T ⊆ S.
  std::vector<double> values(masks, 0.0);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    double h = 0.0;
    for (std::size_t sub = mask; sub; sub = (sub - 1) & mask) h += mobius[sub];
    values[mask] = h;
  }
  return MonotoneScorer(feature_count, std::move(omega), std::move(values));
}

}  // namespace ivfs::synthetic
