#include "l1sketch/cid.hpp"

#include <algorithm>
#include <cmath>

#include "l1sketch/densities.hpp"
#include "l1sketch/errors.hpp"
#include "l1sketch/polynomial.hpp"

namespace l1sketch {
namespace {

constexpr double kCalibrationSafetyFactor = 2.0;
constexpr double kMinAbsIntegral = 1e-3;
constexpr std::size_t kMaxCalibrationTerms = std::size_t{1} << 26;

void check_degree(int d) {
  if (d < 0 || d > kMaxDegree) throw ParameterError("degree outside [0, 16]");
}

}  // namespace

ApproxConfig ApproxConfig::from_epsilon(int d, double epsilon_integration, double c_constant) {
  check_degree(d);
  if (!(epsilon_integration > 0.0)) throw ParameterError("integration epsilon must be > 0");
  if (!(c_constant > 0.0)) throw ParameterError("c constant must be > 0");
  const double raw = c_constant * d * d / epsilon_integration;
  if (!(raw < 1e12)) throw ParameterError("r-approximation would need too many terms");
  const auto r = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw)));
  return {d, epsilon_integration, c_constant, r};
}

ApproxConfig ApproxConfig::with_terms(int d, std::size_t r, double c_constant) {
  check_degree(d);
  if (r == 0) throw ParameterError("r must be >= 1");
  return {d, c_constant * d * d / static_cast<double>(r), c_constant, r};
}

void sample_cid_approx_unit(std::size_t r, RandomStream& rng, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double inv_r = 1.0 / static_cast<double>(r);
  for (std::size_t j = 1; j <= r; ++j) {
    const double z = inv_r * sample_std_cauchy(rng);
    const double node = static_cast<double>(j) * inv_r;
    double power = 1.0;
    for (double& component : out) {
      component += z * power;
      power *= node;
    }
  }
}

CIdSample sample_cid_approx_unit(const ApproxConfig& cfg, RandomStream& rng) {
  CIdSample s{std::vector<double>(static_cast<std::size_t>(cfg.d) + 1)};
  sample_cid_approx_unit(cfg.r, rng, s.components);
  return s;
}

CIdRescaler::CIdRescaler(int d) : d_(d) {
  check_degree(d);
  const auto n = static_cast<std::size_t>(d) + 1;
  binom_.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    binom_[k * n] = 1.0;
    for (std::size_t j = 1; j <= k; ++j)
      binom_[k * n + j] = binom_[(k - 1) * n + j - 1] + (j < k ? binom_[(k - 1) * n + j] : 0.0);
  }
}

void CIdRescaler::apply(std::span<const double> unit, double a, double b,
                        std::span<double> out) const {
  if (!(b > a)) throw ParameterError("rescale_cid: need b > a");
  const auto n = static_cast<std::size_t>(d_) + 1;
  const double w = b - a;
  // Powers of a and w up to d.
  double a_pow[kMaxDegree + 1];
  double w_pow[kMaxDegree + 1];
  a_pow[0] = w_pow[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    a_pow[k] = a_pow[k - 1] * a;
    w_pow[k] = w_pow[k - 1] * w;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += binom_[k * n + j] * a_pow[k - j] * w_pow[j] * unit[j];
    out[k] = w * acc;
  }
}

CIdSample rescale_cid(const CIdSample& z, double a, double b) {
  if (z.components.empty()) throw ParameterError("rescale_cid: empty sample");
  const CIdRescaler rescaler(static_cast<int>(z.components.size()) - 1);
  CIdSample out{std::vector<double>(z.components.size())};
  rescaler.apply(z.components, a, b, out.components);
  return out;
}

double riemann_abs_scale(std::span<const double> coeffs, std::size_t r) {
  if (r == 0) throw ParameterError("riemann_abs_scale: r must be >= 1");
  const double inv_r = 1.0 / static_cast<double>(r);
  double sum = 0.0;
  for (std::size_t j = 1; j <= r; ++j) sum += std::abs(poly::horner(coeffs, static_cast<double>(j) * inv_r));
  return sum * inv_r;
}

double bernstein_ratio(std::span<const double> coeffs) {
  const double base = poly::integrate_abs(coeffs, 0.0, 1.0);
  if (base == 0.0) return 0.0;
  return poly::integrate_abs(poly::derivative(coeffs), 0.0, 1.0) / base;
}

std::vector<double> draw_test_polynomial(int d, RandomStream& rng) {
  check_degree(d);
  std::vector<double> p(static_cast<std::size_t>(d) + 1);
  for (;;) {
    for (double& c : p) c = 2.0 * rng.uniform_open() - 1.0;
    if (poly::integrate_abs(p, 0.0, 1.0) >= kMinAbsIntegral) return p;
  }
}

CalibrationResult calibrate_c(int d_max, double target_eps, std::size_t trials, RandomStream& rng) {
  check_degree(d_max);
  if (!(target_eps > 0.0 && target_eps < 1.0)) throw ParameterError("target epsilon must be in (0, 1)");
  if (trials == 0) throw ParameterError("calibration needs at least one trial");

  CalibrationResult result{0.0, target_eps, trials, {}};
  double worst = 0.0;
  double worst_bernstein = 0.0;
  result.per_degree.push_back({0, 1, 0.0, 0.0});

  for (int d = 1; d <= d_max; ++d) {
    struct Trial {
      std::vector<double> coeffs;
      double exact;
    };
    std::vector<Trial> pool;
    pool.reserve(trials);
    DegreeCalibration cal{d, 1, 0.0, 0.0};
    for (std::size_t i = 0; i < trials; ++i) {
      auto p = draw_test_polynomial(d, rng);
      const double exact = poly::integrate_abs(p, 0.0, 1.0);
      cal.max_bernstein_ratio = std::max(cal.max_bernstein_ratio, bernstein_ratio(p));
      pool.push_back({std::move(p), exact});
    }

    // Failing trials are moved to the front so later probes reject fast.
    auto meets_target = [&](std::size_t r) {
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const double err = std::abs(riemann_abs_scale(pool[i].coeffs, r) - pool[i].exact);
        if (err > target_eps * pool[i].exact) {
          std::rotate(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(i),
                      pool.begin() + static_cast<std::ptrdiff_t>(i) + 1);
          return false;
        }
      }
      return true;
    };

    std::size_t hi = 1;
    while (!meets_target(hi)) {
      if (hi >= kMaxCalibrationTerms) throw InvariantError("calibration did not converge");
      hi *= 2;
    }
    std::size_t lo = hi / 2;  // fails (or 0 when hi == 1)
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (meets_target(mid) ? hi : lo) = mid;
    }
    cal.r_min = hi;
    cal.c_d = static_cast<double>(hi) * target_eps / (static_cast<double>(d) * d);
    worst = std::max(worst, cal.c_d);
    worst_bernstein = std::max(worst_bernstein, cal.max_bernstein_ratio / (static_cast<double>(d) * d));
    result.per_degree.push_back(cal);
  }
  // c also plays the role of the Bernstein-type constant, so it must cover
  // the largest observed int|p'| / int|p| over d^2 as well.
  result.c = std::max(kCalibrationSafetyFactor * (d_max >= 1 ? worst : target_eps), worst_bernstein);
  return result;
}

}  // namespace l1sketch
