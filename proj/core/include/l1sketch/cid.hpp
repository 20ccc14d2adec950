#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l1sketch/random.hpp"

namespace l1sketch {

// Approximate draw of int (1, x, ..., x^d) dL over an interval.
struct CIdSample {
  std::vector<double> components;
};

// Default for the constant c in r = ceil(c d^2 / eps). Produced by
// calibrate_c(5, 0.05, 2000, seed 1) and rounded up; see `l1sketch calibrate`.
inline constexpr double kDefaultCConstant = 4.0;

struct ApproxConfig {
  int d = 1;
  double epsilon_integration = 0.05;
  double c_constant = kDefaultCConstant;
  std::size_t r = 1;

  // r = max(1, ceil(c d^2 / eps)). Throws ParameterError on bad inputs.
  static ApproxConfig from_epsilon(int d, double epsilon_integration, double c_constant);
  // Explicit term count; epsilon is reported as c d^2 / r.
  static ApproxConfig with_terms(int d, std::size_t r, double c_constant = kDefaultCConstant);
};

// sum_{j=1}^r Z_j (1, j/r, ..., (j/r)^d) with Z_j i.i.d. C(0, 1/r).
CIdSample sample_cid_approx_unit(const ApproxConfig& cfg, RandomStream& rng);

// Allocation-free variant; out.size() must be d + 1.
void sample_cid_approx_unit(std::size_t r, RandomStream& rng, std::span<double> out);

// Affine map of a [0,1] draw onto [a, b]:
//   X_k = (b - a) sum_j binom(k, j) a^(k-j) (b-a)^j Z_j.
class CIdRescaler {
 public:
  explicit CIdRescaler(int d);

  int degree() const { return d_; }
  // out may not alias unit. Throws ParameterError unless b > a.
  void apply(std::span<const double> unit, double a, double b, std::span<double> out) const;

 private:
  int d_;
  std::vector<double> binom_;  // (d+1) x (d+1) Pascal triangle
};

CIdSample rescale_cid(const CIdSample& z, double a, double b);

// (1/r) sum_{j=1}^r |p(j/r)|: the exact Cauchy scale of a . X under the
// r-term approximation.
double riemann_abs_scale(std::span<const double> coeffs, std::size_t r);

// int_0^1 |p'| / int_0^1 |p|.
double bernstein_ratio(std::span<const double> coeffs);

// Degree-d polynomial with coefficients uniform on [-1, 1], redrawn until
// int_0^1 |p| >= 1e-3.
std::vector<double> draw_test_polynomial(int d, RandomStream& rng);

struct DegreeCalibration {
  int d = 0;
  std::size_t r_min = 1;
  double c_d = 0.0;
  double max_bernstein_ratio = 0.0;
};

struct CalibrationResult {
  double c = 0.0;
  double target_eps = 0.0;
  std::size_t trials = 0;
  std::vector<DegreeCalibration> per_degree;
};

// Smallest r (doubling then bisection) meeting the relative Riemann error
// target on every trial polynomial, per degree. The result is
//   c = max(2 * max_d r eps / d^2, max_d (max int|p'| / int|p|) / d^2),
// so it bounds both the Riemann error and the Bernstein-type ratio seen.
CalibrationResult calibrate_c(int d_max, double target_eps, std::size_t trials, RandomStream& rng);

}  // namespace l1sketch
