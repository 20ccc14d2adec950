#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace l1sketch {

// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the same
// (counter, key) always yields the same four words on every platform.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Counter-based random stream. The seed is the Philox key, the stream id
// selects the upper half of the counter, and an internal 64-bit block index
// fills the lower half. Streams with equal (seed, stream_id) produce
// bit-identical sequences regardless of thread placement.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t blocks_consumed() const { return block_; }

  std::uint64_t next_u64() {
    if (buffered_ == 0) refill();
    return buffer_[2 - buffered_--];
  }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

  // Box-Muller yields normals in pairs; the unused half is kept here so the
  // stream stays a pure function of (seed, stream_id, draws so far).
  bool has_spare_normal() const { return has_spare_; }
  double take_spare_normal() {
    has_spare_ = false;
    return spare_;
  }
  void stash_normal(double z) {
    spare_ = z;
    has_spare_ = true;
  }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// C(center, scale) via the quantile transform. scale == 0 returns center.
// Throws ParameterError for negative scale.
double sample_cauchy(double center, double scale, RandomStream& rng);

// Standard Cauchy without argument checks; the hot path of every sketch.
inline double sample_std_cauchy(RandomStream& rng);

// Two independent N(0,1) draws (Box-Muller). Bypasses the spare cache.
std::pair<double, double> sample_std_normal_pair(RandomStream& rng);

double sample_std_normal(RandomStream& rng);

// Chi-squared with one degree of freedom: the square of a standard normal.
double sample_chi2_1(RandomStream& rng);

}  // namespace l1sketch

#include <cmath>
#include <numbers>

namespace l1sketch {

inline double sample_std_cauchy(RandomStream& rng) {
  return std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
}

}  // namespace l1sketch
