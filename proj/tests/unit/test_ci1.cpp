#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "l1sketch/ci1.hpp"
#include "l1sketch/errors.hpp"
#include "oracles.hpp"

using namespace l1sketch;
using namespace l1sketch::testing;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

std::vector<CI1Sample> draw_ci1(std::size_t n, std::uint64_t seed, RejectionStats* stats = nullptr) {
  RandomStream rng(seed, 0);
  std::vector<CI1Sample> out(n);
  for (auto& z : out) z = sample_ci1_unit(rng, stats);
  return out;
}

// Max of f/g over a polar grid with log-spaced radii up to r_max.
double ratio_sup(double r_max, int radii, int angles, bool* dominated) {
  double sup = 0.0;
  *dominated = true;
  for (int i = 0; i < radii; ++i) {
    const double rho = i == 0 ? 0.0 : std::pow(10.0, -3.0 + (std::log10(r_max) + 3.0) * i / (radii - 1));
    for (int k = 0; k < angles; ++k) {
      const double th = 2.0 * pi * k / angles;
      const double x0 = rho * std::cos(th);
      const double x1 = rho * std::sin(th);
      const double f = ci1_density(x0, x1);
      const double g = student_envelope_density(x0, x1);
      if (f > kEnvelopeConstant / pi * g) *dominated = false;
      sup = std::max(sup, f / g);
    }
  }
  return sup;
}

}  // namespace

TEST_CASE("density closed-form values") {
  CHECK(ci1_density(0.0, 0.0) == doctest::Approx(4.0 / (pi * pi) + 1.0 / pi).epsilon(1e-14));
  CHECK(ci1_density(1.0, 0.5) ==
        doctest::Approx(1.0 / (pi * pi) + 1.0 / (2.0 * std::sqrt(2.0) * pi)).epsilon(1e-14));
  CHECK(ci1_density(0.0, 0.0) == doctest::Approx(0.723595).epsilon(1e-6));
  CHECK(ci1_density(1.0, 0.5) == doctest::Approx(0.213861).epsilon(1e-6));

  RandomStream rng(41, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x0 = 10.0 * sample_std_cauchy(rng);
    const double x1 = 10.0 * sample_std_cauchy(rng);
    CHECK(ci1_density(x0, x1) == doctest::Approx(ci1_density(-x0, -x1)).epsilon(1e-12));
    CHECK(ci1_density(x0, x1) >= 0.0);
  }
}

TEST_CASE("density trace reports Q and the branch") {
  const auto diag = ci1_density_trace(2.0, 1.0);
  CHECK(diag.branch == CI1Branch::diagonal);
  CHECK(diag.q == cplx(5.0, 0.0));
  const auto gen = ci1_density_trace(1.0, 2.0);
  CHECK(gen.branch == CI1Branch::generic);
  CHECK(gen.q == cplx(2.0, 6.0));
  CHECK(gen.value == ci1_density(1.0, 2.0));
  // Just outside the band switches to the generic formula.
  CHECK(ci1_density_trace(0.0, 1e-8).branch == CI1Branch::generic);
  CHECK(ci1_density_trace(0.0, 0.4e-8).branch == CI1Branch::diagonal);
}

TEST_CASE("density matches Fourier inversion of the characteristic function") {
  RandomStream rng(42, 0);
  std::vector<std::pair<double, double>> points{{0.3, -0.7}, {2.0, 0.1}, {-5.0, 4.0}, {0.0, 0.5},
                                                {12.0, -30.0}, {0.9, 0.46}};
  for (int i = 0; i < 20; ++i) points.emplace_back(3.0 * sample_std_cauchy(rng), 3.0 * sample_std_cauchy(rng));
  for (auto [x0, x1] : points) {
    CAPTURE(x0);
    CAPTURE(x1);
    const double oracle = ci1_density_fourier(x0, x1);
    CHECK(ci1_density(x0, x1) == doctest::Approx(oracle).epsilon(1e-5).scale(1e-9));
  }
  // Diagonal points too.
  for (double x0 : {-3.0, 0.0, 0.5, 4.0})
    CHECK(ci1_density(x0, x0 / 2.0) == doctest::Approx(ci1_density_fourier(x0, x0 / 2.0)).epsilon(1e-5));
}

TEST_CASE("fast real expansion equals the complex evaluation") {
  RandomStream rng(43, 0);
  for (int i = 0; i < 2000; ++i) {
    const double x0 = 5.0 * sample_std_cauchy(rng);
    const double x1 = 5.0 * sample_std_cauchy(rng);
    if (std::abs(x0 - 2.0 * x1) < 1e-3) continue;
    const double fast = ci1_density_generic(x0, x1);
    const double slow = ci1_density_generic_complex(x0, x1);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("complex atan follows the principal branch") {
  RandomStream rng(44, 0);
  for (int i = 0; i < 500; ++i) {
    const cplx z(3.0 * sample_std_normal(rng), 3.0 * sample_std_normal(rng));
    const cplx a = complex_atan(z);
    CHECK(std::abs(a - std::atan(z)) < 1e-12 * (1.0 + std::abs(a)));
    CHECK(std::abs(a.real()) < pi / 2.0);
    CHECK(std::abs(std::tan(a) - z) < 1e-9 * (1.0 + std::abs(z)));
  }
  CHECK(principal_log(cplx(-1.0, 0.0)).imag() == doctest::Approx(pi));
  CHECK(principal_log(cplx(-1.0, -0.0)).imag() == doctest::Approx(pi));
}

TEST_CASE("complex atan satisfies the addition identities") {
  RandomStream rng(45, 0);
  auto in_unit_disc = [&] {
    for (;;) {
      const cplx z(2.0 * rng.uniform_open() - 1.0, 2.0 * rng.uniform_open() - 1.0);
      if (std::abs(z) < 0.95) return z;
    }
  };
  for (int i = 0; i < 300; ++i) {
    // |x|, |y| < 1: atan x + atan y = atan((x + y) / (1 - xy)).
    const cplx x = in_unit_disc();
    const cplx y = in_unit_disc();
    CHECK(std::abs(complex_atan(x) + complex_atan(y) - complex_atan((x + y) / (1.0 - x * y))) < 1e-10);

    // a > 0, a^2 + b^2 > 1: atan(a+bi) + atan(a-bi) = pi + atan(2a / (1 - a^2 - b^2)).
    const double a = 0.05 + 3.0 * rng.uniform_open();
    double b = 3.0 * (2.0 * rng.uniform_open() - 1.0);
    if (a * a + b * b <= 1.05) b = std::copysign(1.5, b);
    const cplx lhs = complex_atan(cplx(a, b)) + complex_atan(cplx(a, -b));
    const cplx rhs = pi + complex_atan(cplx(2.0 * a / (1.0 - a * a - b * b), 0.0));
    CHECK(std::abs(lhs - rhs) < 1e-10);

    // Conjugate difference: atan(a+bi) - atan(a-bi) = atan(2ib / (1 + a^2 + b^2)).
    const double c = 4.0 * (2.0 * rng.uniform_open() - 1.0);
    const cplx diff = complex_atan(cplx(c, b)) - complex_atan(cplx(c, -b));
    CHECK(std::abs(diff - complex_atan(cplx(0.0, 2.0 * b / (1.0 + c * c + b * b)))) < 1e-10);
  }
}

TEST_CASE("branch continuity across x0 = 2 x1") {
  for (double x0 : {-2.0, 0.0, 1.0, 5.0}) {
    const double diag = ci1_density_diagonal(x0);
    for (double off : {-1e-6, 1e-6}) {
      CAPTURE(x0);
      CHECK(std::abs(ci1_density_generic(x0, x0 / 2.0 + off) - diag) <= 1e-4);
    }
  }
}

TEST_CASE("student envelope") {
  CHECK(student_envelope_density(0.0, 0.0) == doctest::Approx(1.0 / pi).epsilon(1e-14));
  CHECK(student_envelope_density(1.0, 0.5) == doctest::Approx(std::pow(2.0, -1.5) / pi).epsilon(1e-14));

  // Integrate over R^2 through x = tan(theta) in each coordinate.
  using boost::math::quadrature::gauss_kronrod;
  auto inner = [](double a) {
    const double x0 = std::tan(a);
    const double ja = 1.0 + x0 * x0;
    return gauss_kronrod<double, 61>::integrate(
        [&](double b) {
          const double x1 = std::tan(b);
          return student_envelope_density(x0, x1) * ja * (1.0 + x1 * x1);
        },
        -pi / 2.0, pi / 2.0, 15, 1e-10);
  };
  const double mass = gauss_kronrod<double, 61>::integrate(inner, -pi / 2.0, pi / 2.0, 15, 1e-9);
  CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("envelope sampler marginals") {
  RandomStream rng(46, 0);
  std::vector<double> u(100000), v(100000);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto z = sample_student_envelope(rng);
    u[i] = z.x0;
    v[i] = 2.0 * z.x1 - z.x0;
  }
  CHECK(median_abs(u) == doctest::Approx(1.0).epsilon(0.03));
  CHECK(median_abs(v) == doctest::Approx(1.0).epsilon(0.03));

  RandomStream a(9, 3), b(9, 3);
  for (int i = 0; i < 100; ++i) {
    const auto za = sample_student_envelope(a);
    const auto zb = sample_student_envelope(b);
    CHECK(za.x0 == zb.x0);
    CHECK(za.x1 == zb.x1);
  }
}

TEST_CASE("exact sampler: marginals, acceptance rate and linear functionals") {
  RejectionStats stats;
  const auto draws = draw_ci1(100000, 47, &stats);
  std::vector<double> x0(draws.size()), x1(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    x0[i] = draws[i].x0;
    x1[i] = draws[i].x1;
  }
  CHECK(ks_cauchy(x0, 1.0) < 0.01);
  CHECK(ks_cauchy(x1, 0.5) < 0.01);
  CHECK(stats.accepted == draws.size());
  const double rate = static_cast<double>(stats.accepted) / static_cast<double>(stats.proposals);
  CHECK(std::abs(rate - pi / 25.0) < 0.01);

  struct Functional {
    double c0, c1, scale;
  };
  for (auto [c0, c1, scale] : {Functional{1.0, -2.0, 0.5}, Functional{3.0, 0.0, 3.0}, Functional{1.0, 1.0, 1.5}}) {
    std::vector<double> w(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) w[i] = c0 * draws[i].x0 + c1 * draws[i].x1;
    CAPTURE(c0);
    CAPTURE(c1);
    CHECK(ks_cauchy(w, scale) < 0.01);
  }
}

TEST_CASE("rescale_ci1") {
  const CI1Sample z{0.7, -1.3};
  const auto same = rescale_ci1(z, 0.0, 1.0);
  CHECK(same.x0 == z.x0);
  CHECK(same.x1 == z.x1);
  CHECK_THROWS_AS(rescale_ci1(z, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(rescale_ci1(z, 2.0, 1.0), ParameterError);

  const auto draws = draw_ci1(100000, 48);
  std::vector<double> second(draws.size()), first(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    second[i] = rescale_ci1(draws[i], 0.0, 2.0).x1;
    first[i] = rescale_ci1(draws[i], 3.0, 4.0).x0;
  }
  CHECK(median_abs(second) == doctest::Approx(2.0).epsilon(0.03));
  CHECK(median_abs(first) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("envelope domination and empirical tightness") {
  bool dominated = false;
  const double sup_near = ratio_sup(1e4, 200, 400, &dominated);
  CHECK(dominated);
  CHECK(sup_near <= kEnvelopeConstant / pi);

  // The supremum is only approached far out, so probe a larger radius for
  // the lower bound.
  const double sup_far = ratio_sup(1e6, 60, 4000, &dominated);
  CHECK(dominated);
  CHECK(sup_far >= 2.8);
  CHECK(sup_far <= 2.0 * std::sqrt(2.0) + 1e-6);
}

TEST_CASE("sampler is deterministic per stream") {
  const auto a = draw_ci1(50, 49);
  const auto b = draw_ci1(50, 49);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x0 == b[i].x0);
    CHECK(a[i].x1 == b[i].x1);
  }
}
