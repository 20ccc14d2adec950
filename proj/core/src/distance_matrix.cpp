#include "l1sketch/distance_matrix.hpp"

namespace l1sketch {

std::string_view to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::exact: return "exact";
    case DistanceMethod::sketch: return "sketch";
    case DistanceMethod::mc: return "mc";
  }
  return "unknown";
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> names, DistanceMethod method)
    : names_(std::move(names)), entries_(names_.size() * names_.size(), 0.0), method_(method) {}

void DistanceMatrix::set(std::size_t j, std::size_t k, double value) {
  if (j == k) return;
  entries_[j * size() + k] = value;
  entries_[k * size() + j] = value;
}

}  // namespace l1sketch
