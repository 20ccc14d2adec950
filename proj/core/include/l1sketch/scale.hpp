#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace l1sketch {

// Estimators for the scale D of i.i.d. C(0, D) samples.
enum class Estimator { geometric_mean, median };

std::string_view to_string(Estimator e);
std::optional<Estimator> parse_estimator(std::string_view name);

struct ScaleEstimate {
  double value = 0.0;
  std::size_t t = 0;
  double epsilon = 0.0;
  double delta = 0.0;
};

// ceil((8/eps)^2 * ln(m^2/delta)): enough samples so that, by a union bound
// over all m^2 pairs, every geometric-mean estimate is within 1 +- eps with
// probability at least 1 - delta. Requires eps in (0, 1/2], delta in (0, 1)
// and m >= 2; throws ParameterError otherwise.
std::size_t required_sample_count(double epsilon, double delta, std::size_t m);

// prod |x_j|^(1/t), accumulated in log space. Any exact zero gives 0.
ScaleEstimate geometric_mean_estimate(std::span<const double> samples, double epsilon, double delta);

// Sample median of |x_j| (the C(0,1) absolute-value median is tan(pi/4) = 1).
// No concentration bound is attached to this one.
ScaleEstimate median_estimate(std::span<const double> samples, double epsilon, double delta);

ScaleEstimate estimate_scale(Estimator e, std::span<const double> samples, double epsilon,
                             double delta);

}  // namespace l1sketch
