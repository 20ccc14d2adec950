#include <cmath>
#include <vector>

#include "doctest.h"
#include "l1sketch/errors.hpp"
#include "l1sketch/random.hpp"
#include "l1sketch/scale.hpp"

using namespace l1sketch;

TEST_CASE("required_sample_count") {
  CHECK(required_sample_count(0.2, 0.1, 10) == 11053);
  // m = 2, delta = 4/e^2 makes the logarithm exactly 2: (8/0.5)^2 * 2.
  CHECK(required_sample_count(0.5, 4.0 / std::exp(2.0), 2) == 512);
  CHECK(required_sample_count(0.2, 0.1, 20) > required_sample_count(0.2, 0.1, 10));
  CHECK(required_sample_count(0.1, 0.1, 10) > required_sample_count(0.2, 0.1, 10));

  CHECK_THROWS_AS(required_sample_count(0.0, 0.1, 10), ParameterError);
  CHECK_THROWS_AS(required_sample_count(0.6, 0.1, 10), ParameterError);
  CHECK_THROWS_AS(required_sample_count(0.2, 0.0, 10), ParameterError);
  CHECK_THROWS_AS(required_sample_count(0.2, 1.0, 10), ParameterError);
  CHECK_THROWS_AS(required_sample_count(0.2, 0.1, 1), ParameterError);
  CHECK_NOTHROW(required_sample_count(0.5, 0.1, 2));
}

TEST_CASE("geometric mean estimate") {
  const std::vector<double> two{1.0, 4.0};
  CHECK(geometric_mean_estimate(two, 0.2, 0.1).value == doctest::Approx(2.0));
  CHECK(geometric_mean_estimate(two, 0.2, 0.1).t == 2);

  const std::vector<double> flat(50, -7.5);
  CHECK(geometric_mean_estimate(flat, 0.2, 0.1).value == doctest::Approx(7.5).epsilon(1e-14));

  const std::vector<double> with_zero{3.0, 0.0, 2.0};
  CHECK(geometric_mean_estimate(with_zero, 0.2, 0.1).value == 0.0);

  CHECK_THROWS_AS(geometric_mean_estimate(std::vector<double>{}, 0.2, 0.1), ParameterError);

  // Extreme magnitudes do not overflow in log space.
  const std::vector<double> huge{1e300, 1e300, 1e-300};
  CHECK(geometric_mean_estimate(huge, 0.2, 0.1).value == doctest::Approx(1e100).epsilon(1e-9));
}

TEST_CASE("geometric mean is scale equivariant") {
  RandomStream rng(31, 0);
  std::vector<double> x(1000), y(1000);
  for (auto& v : x) v = sample_std_cauchy(rng);
  for (double lambda : {0.001, 0.5, 3.0, 1e6}) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = lambda * x[i];
    const double a = geometric_mean_estimate(x, 0.2, 0.1).value;
    const double b = geometric_mean_estimate(y, 0.2, 0.1).value;
    CHECK(b == doctest::Approx(lambda * a).epsilon(1e-12));
  }
}

TEST_CASE("geometric mean concentrates as the tail bound says") {
  // C(0,3), t = 1e4, eps = 0.05: bound 2 exp(-t eps^2 / 8) ~ 0.089.
  RandomStream rng(32, 0);
  const double eps = 0.05;
  int failures = 0;
  std::vector<double> x(10000);
  for (int rep = 0; rep < 200; ++rep) {
    for (auto& v : x) v = sample_cauchy(0.0, 3.0, rng);
    const double est = geometric_mean_estimate(x, eps, 0.1).value;
    failures += (est < 2.85 || est > 3.15);
  }
  const double bound = 2.0 * std::exp(-10000.0 * eps * eps / 8.0);
  CHECK(static_cast<double>(failures) / 200.0 <= bound);
}

TEST_CASE("median estimator") {
  const std::vector<double> v{-1.0, 2.0, -3.0};
  CHECK(median_estimate(v, 0.2, 0.1).value == 2.0);
  RandomStream rng(33, 0);
  std::vector<double> x(100001);
  for (auto& s : x) s = sample_cauchy(0.0, 2.0, rng);
  CHECK(estimate_scale(Estimator::median, x, 0.2, 0.1).value == doctest::Approx(2.0).epsilon(0.03));
  CHECK(parse_estimator("median") == Estimator::median);
  CHECK(parse_estimator("geometric_mean") == Estimator::geometric_mean);
  CHECK_FALSE(parse_estimator("mean").has_value());
  CHECK(to_string(Estimator::geometric_mean) == "geometric_mean");
}
