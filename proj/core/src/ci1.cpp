#include "l1sketch/ci1.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "l1sketch/errors.hpp"

namespace l1sketch {
namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

constexpr double kInvPi2 = 1.0 / (pi * pi);

cplx principal_pow(cplx z, double p) { return std::exp(p * principal_log(z)); }

}  // namespace

double diagonal_tolerance(double x0) { return 1e-8 * (1.0 + std::abs(x0)); }

cplx principal_log(cplx z) {
  // std::log honours signed zero on the cut; force the (-pi, pi] convention.
  if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
  return std::log(z);
}

cplx complex_atan(cplx z) {
  const cplx i(0.0, 1.0);
  return 0.5 * i * (principal_log(1.0 - i * z) - principal_log(1.0 + i * z));
}

double ci1_density_generic(double x0, double x1) {
  const double d = x0 - 2.0 * x1;
  const double re = 1.0 + x0 * x0;
  const double im = 4.0 * x1 - 2.0 * x0;
  // |Q|^2 = 1 + 6x0^2 + x0^4 - 16 x0 x1 + 16 x1^2
  const double q_norm = re * re + im * im;
  const double q_abs = std::sqrt(q_norm);

  // Principal sqrt(Q); Re Q >= 1 so the real part is well conditioned.
  const double sr = std::sqrt(0.5 * (q_abs + re));
  const double si = im / (2.0 * sr);

  // atan(w) for w = i sqrt(Q) / d, expanded through
  //   atan(w) = (i/2) (log(1 - i w) - log(1 + i w)),  1 -+ i w = 1 +- s,
  // with s = sqrt(Q) / d and the principal log (arg in (-pi, pi]).
  const double s_re = sr / d;
  const double s_im = si / d;
  const double plus_re = 1.0 + s_re;
  const double minus_re = 1.0 - s_re;
  const double atan_re = -0.5 * (std::atan2(s_im, plus_re) - std::atan2(-s_im, minus_re));
  const double atan_im = 0.25 * std::log((plus_re * plus_re + s_im * s_im) /
                                         (minus_re * minus_re + s_im * s_im));

  // Q^(3/2) = Q * sqrt(Q) on the principal branch.
  const double p_re = re * sr - im * si;
  const double p_im = re * si + im * sr;
  // Re(atan / Q^(3/2)).
  const double ratio_re = (atan_re * p_re + atan_im * p_im) / (p_re * p_re + p_im * p_im);
  return 4.0 * kInvPi2 / q_norm + 2.0 * kInvPi2 * ratio_re;
}

double ci1_density_generic_complex(double x0, double x1) {
  const double d = x0 - 2.0 * x1;
  const cplx q(1.0 + x0 * x0, 4.0 * x1 - 2.0 * x0);
  const cplx ratio = complex_atan(cplx(0.0, 1.0) * principal_pow(q, 0.5) / d) / principal_pow(q, 1.5);
  return 4.0 * kInvPi2 / std::norm(q) + 2.0 * kInvPi2 * ratio.real();
}

double ci1_density_diagonal(double x0) {
  const double w = 1.0 + x0 * x0;
  return 4.0 * kInvPi2 / (w * w) + 1.0 / (pi * w * std::sqrt(w));
}

CI1DensityTrace ci1_density_trace(double x0, double x1) {
  CI1DensityTrace tr;
  tr.q = cplx(1.0 + x0 * x0, 4.0 * x1 - 2.0 * x0);
  if (std::abs(x0 - 2.0 * x1) <= diagonal_tolerance(x0)) {
    tr.branch = CI1Branch::diagonal;
    tr.value = ci1_density_diagonal(x0);
  } else {
    tr.branch = CI1Branch::generic;
    // Far in the light-tailed directions the two terms nearly cancel.
    tr.value = std::max(0.0, ci1_density_generic(x0, x1));
  }
  return tr;
}

double ci1_density(double x0, double x1) { return ci1_density_trace(x0, x1).value; }

double student_envelope_density(double x0, double x1) {
  const double v = 2.0 * x1 - x0;
  const double base = 1.0 + x0 * x0 + v * v;
  return 1.0 / (pi * base * std::sqrt(base));
}

CI1Sample sample_student_envelope(RandomStream& rng) {
  for (;;) {
    const auto [y1, y2] = sample_std_normal_pair(rng);
    const double w = sample_chi2_1(rng);
    if (w == 0.0) continue;
    const double root = std::sqrt(w);
    const double u = y1 / root;
    const double v = y2 / root;
    return {u, 0.5 * (u + v)};
  }
}

CI1Sample sample_ci1_unit(RandomStream& rng, RejectionStats* stats) {
  constexpr double bound = kEnvelopeConstant / pi;
  for (std::uint64_t iter = 0; iter < kRejectionIterationCap; ++iter) {
    const CI1Sample z = sample_student_envelope(rng);
    const double u = rng.uniform_open();
    const double g = bound * student_envelope_density(z.x0, z.x1);
    const double f = ci1_density(z.x0, z.x1);
    if (stats) ++stats->proposals;
    if (f > g) {
      std::ostringstream os;
      os.precision(17);
      os << "envelope domination violated at (" << z.x0 << ", " << z.x1 << "): f = " << f
         << " > C/pi * g = " << g;
      throw InvariantError(os.str());
    }
    if (u * g <= f) {
      if (stats) ++stats->accepted;
      return z;
    }
  }
  throw InvariantError("CI1 rejection sampler exceeded its iteration cap");
}

CI1Sample rescale_ci1(CI1Sample z, double a, double b) {
  if (!(b > a)) throw ParameterError("rescale_ci1: need b > a");
  const double w = b - a;
  return {w * z.x0, w * (a * z.x0 + w * z.x1)};
}

}  // namespace l1sketch
