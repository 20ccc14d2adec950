#pragma once

#include <complex>
#include <cstdint>

#include "l1sketch/random.hpp"

namespace l1sketch {

// One draw of (int_a^b 1 dL, int_a^b x dL) for a Cauchy motion L.
struct CI1Sample {
  double x0 = 0.0;
  double x1 = 0.0;
};

enum class CI1Branch { generic, diagonal };

struct CI1DensityTrace {
  std::complex<double> q;
  CI1Branch branch = CI1Branch::generic;
  double value = 0.0;
};

// f <= (kEnvelopeConstant / pi) * g everywhere, g the Student envelope.
inline constexpr double kEnvelopeConstant = 25.0;
inline constexpr std::uint64_t kRejectionIterationCap = 10000;

// Width of the band around x0 == 2*x1 where the diagonal closed form is used.
double diagonal_tolerance(double x0);

// Principal branches: log with argument in (-pi, pi], and
// atan(z) = (i/2) (log(1 - iz) - log(1 + iz)).
std::complex<double> principal_log(std::complex<double> z);
std::complex<double> complex_atan(std::complex<double> z);

// Joint density of CI_1(0,1) at (x0, x1).
double ci1_density(double x0, double x1);
CI1DensityTrace ci1_density_trace(double x0, double x1);

// The two closed forms separately. The generic one is singular on
// x0 == 2*x1; the diagonal one is its limit there and ignores x1.
double ci1_density_generic(double x0, double x1);
double ci1_density_diagonal(double x0);

// Same generic closed form evaluated with std::complex arithmetic and
// complex_atan; slower, kept as a cross-check of the expanded real form.
double ci1_density_generic_complex(double x0, double x1);

// Bivariate Student (1 dof) envelope: (1/pi) (1 + x0^2 + (2 x1 - x0)^2)^(-3/2).
double student_envelope_density(double x0, double x1);

// Exact envelope draw: u = y1/sqrt(w), v = y2/sqrt(w) with y ~ N2(0, I),
// w ~ chi2(1); returns (u, (u + v) / 2).
CI1Sample sample_student_envelope(RandomStream& rng);

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

// Exact CI_1(0,1) draw by rejection from the Student envelope. Throws
// InvariantError if the envelope fails to dominate at a proposal or the
// iteration cap is hit.
CI1Sample sample_ci1_unit(RandomStream& rng, RejectionStats* stats = nullptr);

// Maps a CI_1(0,1) draw to CI_1(a,b). Throws ParameterError unless b > a.
CI1Sample rescale_ci1(CI1Sample z, double a, double b);

}  // namespace l1sketch
