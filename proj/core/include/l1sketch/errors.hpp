#pragma once

#include <stdexcept>
#include <string>

namespace l1sketch {

// Malformed input text (JSON syntax, wrong field types).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid family: overlapping segments, bad indices, degree cap.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of range (epsilon, delta, t, mode...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Something that should be impossible happened, e.g. the rejection sampler
// hit its iteration cap. Indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace l1sketch
