#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "l1sketch/distance_matrix.hpp"
#include "l1sketch/io.hpp"

namespace l1sketch::cli {

// 64-bit FNV-1a of the raw input bytes, as 16 hex digits.
std::string content_digest(std::string_view bytes);

// Everything that determines an output file's bytes. Wall time and the
// worker count are deliberately absent: neither may change the output.
class RunManifest {
 public:
  RunManifest(std::string command, std::uint64_t seed);

  void set_input(std::string_view path, std::string_view bytes);
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void add_echo(const RunEcho& echo);

  const Annotations& entries() const { return entries_; }

 private:
  Annotations entries_;
};

}  // namespace l1sketch::cli
