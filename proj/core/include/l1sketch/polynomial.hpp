#pragma once

#include <span>
#include <vector>

// Dense univariate polynomials in the monomial basis; coefficient k
// multiplies x^k.
namespace l1sketch::poly {

double horner(std::span<const double> coeffs, double x);

std::vector<double> derivative(std::span<const double> coeffs);

// Antiderivative with zero constant term.
std::vector<double> antiderivative(std::span<const double> coeffs);

double integrate(std::span<const double> coeffs, double lo, double hi);

// Coefficients of u -> p(origin + width * u).
std::vector<double> affine_compose(std::span<const double> coeffs, double origin, double width);

// Drops trailing coefficients whose magnitude is at most rel_tol times the
// largest one. Returns an empty vector for the zero polynomial.
std::vector<double> trimmed(std::span<const double> coeffs, double rel_tol = 0.0);

// Distinct real roots strictly inside (lo, hi), ascending, located by
// bisection on Sturm-sequence sign-change counts to within tol * (hi - lo).
std::vector<double> roots_in_interval(std::span<const double> coeffs, double lo, double hi,
                                      double tol = 1e-12);

// Exact integral of |p| over [lo, hi]: the interval is split at the real
// roots of p and each sign-definite piece is integrated in closed form.
double integrate_abs(std::span<const double> coeffs, double lo, double hi);

}  // namespace l1sketch::poly
