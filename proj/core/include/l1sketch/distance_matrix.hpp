#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace l1sketch {

enum class DistanceMethod { exact, sketch, mc };

std::string_view to_string(DistanceMethod method);

// Effective parameters a matrix was produced with. NaN / 0 mean "not used".
struct RunEcho {
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::size_t t = 0;
  std::uint64_t seed = 0;
  // Method-specific extras in insertion order (mode, r, sample counts...).
  std::vector<std::pair<std::string, std::string>> extra;
};

// Symmetric m x m matrix with zero diagonal, stored row-major.
class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<std::string> names, DistanceMethod method);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  DistanceMethod method() const { return method_; }

  double operator()(std::size_t j, std::size_t k) const { return entries_[j * size() + k]; }

  // Writes (j,k) and (k,j). Diagonal writes are ignored.
  void set(std::size_t j, std::size_t k, double value);

  const std::vector<double>& entries() const { return entries_; }

  RunEcho& echo() { return echo_; }
  const RunEcho& echo() const { return echo_; }

 private:
  std::vector<std::string> names_;
  std::vector<double> entries_;
  DistanceMethod method_;
  RunEcho echo_;
};

}  // namespace l1sketch
