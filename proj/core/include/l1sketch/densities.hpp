#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l1sketch/distance_matrix.hpp"
#include "l1sketch/random.hpp"

namespace l1sketch {

// Monomial-basis conditioning degrades quickly past this.
inline constexpr int kMaxDegree = 16;

// Merged, strictly increasing interval endpoints a_0 < ... < a_{s-1}.
class Breakpoints {
 public:
  // Throws ValidationError unless the points are finite, strictly
  // increasing and at least two.
  explicit Breakpoints(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const { return points_; }

  // Index l with a_l <= x < a_{l+1}, or nullopt outside [a_0, a_{s-1}).
  std::optional<std::size_t> interval_of(double x) const;

  bool operator==(const Breakpoints&) const = default;

 private:
  std::vector<double> points_;
};

// One polynomial piece on [a_b, a_c); coeffs[k] multiplies x^k.
struct PolySegment {
  std::size_t b = 0;
  std::size_t c = 0;
  std::vector<double> coeffs;

  bool operator==(const PolySegment&) const = default;
};

struct PiecewisePolyDensity {
  std::string name;
  std::vector<PolySegment> segments;
  int degree = 0;

  bool operator==(const PiecewisePolyDensity&) const = default;
};

struct DensityFamily {
  Breakpoints breakpoints;
  std::vector<PiecewisePolyDensity> densities;
  int degree = 0;

  std::size_t size() const { return densities.size(); }
  std::vector<std::string> names() const;

  bool operator==(const DensityFamily&) const = default;
};

// A density on its own private endpoints, before merging onto a shared grid.
struct RawSegment {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> coeffs;
};

struct RawDensity {
  std::string name;
  std::vector<RawSegment> segments;
};

// Structural checks always run and throw ValidationError. With strict set,
// nonnegativity (segment endpoints plus 2d+1 Chebyshev interior nodes) and
// unit mass (within 1e-6) are checked and reported as warnings.
std::vector<std::string> validate_family(const DensityFamily& family, bool strict);

// Segment polynomial at x under the half-open convention; 0 off-support.
double eval_density(const PiecewisePolyDensity& f, const Breakpoints& bp, double x);

// Exact total integral of f.
double density_mass(const PiecewisePolyDensity& f, const Breakpoints& bp);

// Sorted union of all endpoints. Segments are split at every interior grid
// point so each output segment covers exactly one elementary interval.
// Coefficient vectors are zero-padded to the family's common degree.
DensityFamily merge_breakpoints(std::span<const RawDensity> raw);

// Coefficients of f on each elementary interval [a_l, a_{l+1}), or nullptr
// where f is zero.
std::vector<const std::vector<double>*> coefficients_by_interval(const PiecewisePolyDensity& f,
                                                                 const Breakpoints& bp);

double exact_l1_distance(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g,
                         const Breakpoints& bp);

DistanceMatrix exact_all_pairs(const DensityFamily& family);

// Draws from a nonnegative density: pick a segment by exact mass, then
// invert the segment CDF by bisection. Segments with negative mass get zero
// weight. Throws ParameterError if the total mass is not positive.
class DensitySampler {
 public:
  DensitySampler(const PiecewisePolyDensity& f, const Breakpoints& bp);

  double operator()(RandomStream& rng) const;

 private:
  struct Piece {
    double lo, hi;
    double cdf_lo;  // antiderivative value at lo
    double mass;
    std::vector<double> antiderivative;
  };
  std::vector<Piece> pieces_;
  std::vector<double> cumulative_;
};

double sample_from_density(const PiecewisePolyDensity& f, const Breakpoints& bp, RandomStream& rng);

}  // namespace l1sketch
