#include "l1sketch/scale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "l1sketch/errors.hpp"

namespace l1sketch {

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::geometric_mean: return "geometric_mean";
    case Estimator::median: return "median";
  }
  return "unknown";
}

std::optional<Estimator> parse_estimator(std::string_view name) {
  if (name == "geometric_mean") return Estimator::geometric_mean;
  if (name == "median") return Estimator::median;
  return std::nullopt;
}

std::size_t required_sample_count(double epsilon, double delta, std::size_t m) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    std::ostringstream os;
    os << "epsilon must lie in (0, 1/2], got " << epsilon;
    throw ParameterError(os.str());
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (m < 2) throw ParameterError("required_sample_count: need m >= 2");
  const double md = static_cast<double>(m);
  const double raw = (8.0 / epsilon) * (8.0 / epsilon) * std::log(md * md / delta);
  // Absorb round-off so that exact integers are not pushed up by one.
  return static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-13)));
}

ScaleEstimate geometric_mean_estimate(std::span<const double> samples, double epsilon,
                                      double delta) {
  if (samples.empty()) throw ParameterError("geometric_mean_estimate: no samples");
  double log_sum = 0.0;
  for (double x : samples) {
    if (x == 0.0) return {0.0, samples.size(), epsilon, delta};
    log_sum += std::log(std::abs(x));
  }
  return {std::exp(log_sum / static_cast<double>(samples.size())), samples.size(), epsilon, delta};
}

ScaleEstimate median_estimate(std::span<const double> samples, double epsilon, double delta) {
  if (samples.empty()) throw ParameterError("median_estimate: no samples");
  std::vector<double> a(samples.size());
  std::transform(samples.begin(), samples.end(), a.begin(), [](double x) { return std::abs(x); });
  const std::size_t n = a.size();
  const auto mid = a.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(a.begin(), mid, a.end());
  double med = *mid;
  if (n % 2 == 0) med = 0.5 * (med + *std::max_element(a.begin(), mid));
  return {med, n, epsilon, delta};
}

ScaleEstimate estimate_scale(Estimator e, std::span<const double> samples, double epsilon,
                             double delta) {
  return e == Estimator::median ? median_estimate(samples, epsilon, delta)
                                : geometric_mean_estimate(samples, epsilon, delta);
}

}  // namespace l1sketch
