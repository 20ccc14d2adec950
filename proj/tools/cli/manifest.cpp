#include "cli/manifest.hpp"

#include <cmath>
#include <cstdio>

#include "l1sketch/version.hpp"

namespace l1sketch::cli {

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest::RunManifest(std::string command, std::uint64_t seed) {
  entries_.emplace_back("command", std::move(command));
  entries_.emplace_back("version", std::string(kVersion));
  entries_.emplace_back("seed", std::to_string(seed));
}

void RunManifest::set_input(std::string_view path, std::string_view bytes) {
  entries_.emplace_back("input", std::string(path));
  entries_.emplace_back("input_digest", content_digest(bytes));
}

void RunManifest::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

void RunManifest::add(std::string key, double value) { add(std::move(key), format_shortest(value)); }

void RunManifest::add_echo(const RunEcho& echo) {
  if (!std::isnan(echo.epsilon)) add("epsilon", echo.epsilon);
  if (!std::isnan(echo.delta)) add("delta", echo.delta);
  if (echo.t) add("t", std::to_string(echo.t));
  for (const auto& [k, v] : echo.extra) add(k, v);
}

}  // namespace l1sketch::cli
