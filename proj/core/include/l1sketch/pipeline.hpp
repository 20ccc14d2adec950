#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l1sketch/cid.hpp"
#include "l1sketch/densities.hpp"
#include "l1sketch/distance_matrix.hpp"
#include "l1sketch/scale.hpp"

namespace l1sketch {

// How the per-interval stochastic integrals are drawn.
//   uniform_fastpath: scalar C(0, width) increments, degree 0 only.
//   exact_ci1:        rejection-sampled CI_1 draws, degree 1 only.
//   cid_approx:       r-term Riemann approximation, any degree >= 1.
//   uniformize:       project onto a piecewise-constant family with r pieces
//                     per elementary interval, then use the fast path.
enum class SketchMode { exact_ci1, cid_approx, uniform_fastpath, uniformize };

std::string_view to_string(SketchMode mode);
std::optional<SketchMode> parse_sketch_mode(std::string_view name);

// m x t projections; row j holds X_j for every replicate.
struct SketchMatrix {
  std::size_t m = 0;
  std::size_t t = 0;
  SketchMode mode = SketchMode::uniform_fastpath;
  std::vector<double> values;

  double operator()(std::size_t j, std::size_t rep) const { return values[j * t + rep]; }
  std::span<const double> row(std::size_t j) const { return {values.data() + j * t, t}; }
};

struct SketchOptions {
  SketchMode mode = SketchMode::uniform_fastpath;
  std::size_t t = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Riemann terms (cid_approx) or pieces per interval (uniformize).
  std::size_t r = 1;
};

// Shares one realisation of the Cauchy motion across all densities per
// replicate; replicate `rep` draws from stream (seed, rep), intervals in
// left-to-right order, so the result does not depend on `threads`.
SketchMatrix sketch_family(const DensityFamily& family, const SketchOptions& options);

// Piecewise-constant family on a grid refining every elementary interval
// into `pieces` equal parts; values are exact sub-interval averages.
DensityFamily uniformize_family(const DensityFamily& family, std::size_t pieces);

// Scale estimates of X_j - X_k for all pairs. Throws ParameterError if t is
// below required_sample_count(epsilon, delta, max(m, 2)).
DistanceMatrix estimate_all_pairs(const SketchMatrix& sketch, std::vector<std::string> names,
                                  double epsilon, double delta,
                                  Estimator estimator = Estimator::geometric_mean);

// Samples per density for the absolute-error Monte Carlo baseline:
// ceil(8 eps^-2 ln(2 m^2 / delta)).
std::size_t mc_sample_count(double epsilon_abs, double delta, std::size_t m);

// Absolute-error baseline: D_jk = mean sgn(f_j - f_k)(X ~ f_j) +
// mean sgn(f_k - f_j)(X ~ f_k), clamped to [0, 2]. Density j samples from
// stream (seed, j) and reuses its draws for every k. Requires a strictly
// valid family (ValidationError otherwise).
DistanceMatrix mc_all_pairs(const DensityFamily& family, double epsilon_abs, double delta,
                            std::uint64_t seed);

struct SchemeConfig {
  DistanceMethod method = DistanceMethod::exact;
  double epsilon = 0.2;
  double delta = 0.1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Estimator estimator = Estimator::geometric_mean;
  double c_constant = kDefaultCConstant;
  // Replicate count; defaults to the minimum the (epsilon, delta) guarantee needs.
  std::optional<std::size_t> t;
  // Overrides the degree-based choice of sketch mode.
  std::optional<SketchMode> sketch_mode;
};

// Dispatches to exact_all_pairs, sketch + estimate, or mc_all_pairs and
// records the effective parameters in the result's echo. For approximate
// sketch modes epsilon is split evenly between integration and estimation.
DistanceMatrix run_scheme(const DensityFamily& family, const SchemeConfig& config);

}  // namespace l1sketch
