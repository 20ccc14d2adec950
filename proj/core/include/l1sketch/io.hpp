#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l1sketch/densities.hpp"
#include "l1sketch/distance_matrix.hpp"

namespace l1sketch {

// Ordered key/value pairs attached to an output file (the run manifest).
using Annotations = std::vector<std::pair<std::string, std::string>>;

// Family format:
//   {"degree": d, "breakpoints": [...],
//    "densities": [{"name": s, "segments": [{"b": i, "c": j, "coeffs": [...]}]}]}
// Breakpoint indices are 0-based; segment k covers [a_b, a_c).
// Throws ParseError (with line and column) on malformed JSON or wrong field
// types, ValidationError on structural violations.
DensityFamily parse_family_json(std::string_view text);
DensityFamily read_family_file(const std::filesystem::path& path);

// Canonical text: fixed key order, two-space indent, shortest round-trip
// decimal doubles, trailing newline.
std::string family_to_json(const DensityFamily& family);

// Shortest decimal string that parses back to exactly v.
std::string format_shortest(double v);

// Header row of names followed by m rows of m values. Annotations, if any,
// come first as "# key: value" lines.
std::string distance_matrix_csv(const DistanceMatrix& dm, const Annotations& annotations = {});

// {"names": [...], "matrix": [[...]], "method": ..., "manifest": {...}}
std::string distance_matrix_json(const DistanceMatrix& dm, const Annotations& annotations = {});

}  // namespace l1sketch
