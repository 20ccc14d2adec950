#pragma once

// Family builders shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "l1sketch/densities.hpp"
#include "l1sketch/polynomial.hpp"
#include "l1sketch/random.hpp"

namespace l1sketch::testing {

inline RawDensity uniform(std::string name, double lo, double hi) {
  return {std::move(name), {{lo, hi, {1.0 / (hi - lo)}}}};
}

inline DensityFamily family_of(std::vector<RawDensity> raw) { return merge_breakpoints(raw); }

// Nonnegative degree-d polynomial on [lo, hi] with Bernstein weights
// drawn from (0.05, 1), in the monomial basis of x.
inline std::vector<double> random_bernstein_piece(int d, double lo, double hi, RandomStream& rng,
                                                  double* mass) {
  std::vector<double> in_u(static_cast<std::size_t>(d) + 1, 0.0);
  double weight_sum = 0.0;
  for (int k = 0; k <= d; ++k) {
    const double beta = 0.05 + 0.95 * rng.uniform_open();
    weight_sum += beta;
    // binom(d,k) u^k (1-u)^(d-k), expanded.
    double binom_dk = 1.0;
    for (int i = 1; i <= k; ++i) binom_dk = binom_dk * (d - k + i) / i;
    for (int i = 0; i <= d - k; ++i) {
      double binom_i = 1.0;
      for (int q = 1; q <= i; ++q) binom_i = binom_i * (d - k - i + q) / q;
      in_u[static_cast<std::size_t>(k + i)] += beta * binom_dk * binom_i * ((i % 2) ? -1.0 : 1.0);
    }
  }
  *mass = (hi - lo) * weight_sum / (d + 1);
  return poly::affine_compose(in_u, -lo / (hi - lo), 1.0 / (hi - lo));
}

// A random unit-mass density with n contiguous degree-d pieces. Endpoints are
// drawn from `grid` when given, otherwise uniformly from [0, span].
inline RawDensity random_density(std::string name, int n, int d, RandomStream& rng,
                                 const std::vector<double>& grid = {}, double span = 4.0) {
  std::vector<double> ends;
  if (grid.empty()) {
    for (int i = 0; i <= n; ++i) ends.push_back(span * rng.uniform_open());
    std::sort(ends.begin(), ends.end());
  } else {
    const auto g = static_cast<std::size_t>(grid.size());
    const auto start = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(g - static_cast<std::size_t>(n)));
    std::vector<std::size_t> picks{start};
    // Strictly increasing grid indices, n + 1 of them, within the grid.
    std::vector<std::size_t> pool;
    for (std::size_t i = start + 1; i < g; ++i) pool.push_back(i);
    for (int i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(pool.size()));
      picks.push_back(pool[j]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::sort(picks.begin(), picks.end());
    for (auto i : picks) ends.push_back(grid[i]);
  }
  RawDensity out{std::move(name), {}};
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double mass = 0.0;
    auto coeffs = random_bernstein_piece(d, ends[static_cast<std::size_t>(i)],
                                         ends[static_cast<std::size_t>(i) + 1], rng, &mass);
    total += mass;
    out.segments.push_back({ends[static_cast<std::size_t>(i)], ends[static_cast<std::size_t>(i) + 1], std::move(coeffs)});
  }
  for (auto& seg : out.segments)
    for (double& c : seg.coeffs) c /= total;
  return out;
}

inline DensityFamily random_family(int m, int n, int d, RandomStream& rng,
                                   const std::vector<double>& grid = {}) {
  std::vector<RawDensity> raw;
  for (int j = 0; j < m; ++j) raw.push_back(random_density("f" + std::to_string(j), n, d, rng, grid));
  return merge_breakpoints(raw);
}

inline std::vector<double> even_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
  return g;
}

}  // namespace l1sketch::testing
