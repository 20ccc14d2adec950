#include "l1sketch/random.hpp"

#include <cmath>
#include <numbers>

#include "l1sketch/errors.hpp"

namespace l1sketch {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c0, hi0, lo0);
    mulhilo(kPhiloxM1, c2, hi1, lo1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {c0, c1, c2, c3};
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

void RandomStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(ctr, key);
  ++block_;
  buffer_[0] = static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
  buffer_[1] = static_cast<std::uint64_t>(out[2]) | (static_cast<std::uint64_t>(out[3]) << 32);
  buffered_ = 2;
}

double sample_cauchy(double center, double scale, RandomStream& rng) {
  if (!(scale >= 0.0)) throw ParameterError("sample_cauchy: scale must be >= 0");
  if (scale == 0.0) return center;
  return center + scale * sample_std_cauchy(rng);
}

std::pair<double, double> sample_std_normal_pair(RandomStream& rng) {
  const double radius = std::sqrt(-2.0 * std::log(rng.uniform_open()));
  const double angle = 2.0 * std::numbers::pi * rng.uniform_open();
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double sample_std_normal(RandomStream& rng) {
  if (rng.has_spare_normal()) return rng.take_spare_normal();
  const auto [z0, z1] = sample_std_normal_pair(rng);
  rng.stash_normal(z1);
  return z0;
}

double sample_chi2_1(RandomStream& rng) {
  const double z = sample_std_normal(rng);
  return z * z;
}

}  // namespace l1sketch
