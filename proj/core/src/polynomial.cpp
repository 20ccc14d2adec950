#include "l1sketch/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace l1sketch::poly {
namespace {

// Relative threshold below which a Sturm remainder is treated as zero.
constexpr double kSturmZeroTol = 1e-12;

double max_abs(std::span<const double> c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

// Remainder of num / den (den nonempty with nonzero leading coefficient).
std::vector<double> remainder(std::vector<double> num, const std::vector<double>& den) {
  const std::size_t dd = den.size() - 1;
  const double lead = den.back();
  while (num.size() > dd) {
    const double q = num.back() / lead;
    const std::size_t shift = num.size() - 1 - dd;
    for (std::size_t i = 0; i <= dd; ++i) num[shift + i] -= q * den[i];
    num.pop_back();
  }
  return num;
}

class SturmChain {
 public:
  explicit SturmChain(std::vector<double> p) {
    chain_.push_back(std::move(p));
    auto dp = trimmed(derivative(chain_.back()));
    if (dp.empty()) return;
    chain_.push_back(std::move(dp));
    while (chain_.back().size() > 1) {
      const auto& prev = chain_[chain_.size() - 2];
      auto r = remainder(prev, chain_.back());
      for (double& v : r) v = -v;
      r = trimmed(r);
      if (r.empty() || max_abs(r) <= kSturmZeroTol * max_abs(prev)) break;
      chain_.push_back(std::move(r));
    }
  }

  int sign_changes(double x) const {
    int changes = 0;
    int last = 0;
    for (const auto& p : chain_) {
      const double v = horner(p, x);
      const int s = (v > 0) - (v < 0);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  // Number of distinct roots in (a, b].
  int count(double a, double b) const { return sign_changes(a) - sign_changes(b); }

 private:
  std::vector<std::vector<double>> chain_;
};

void isolate(const SturmChain& sc, double a, double b, int va, int vb, double tol,
             std::vector<double>& out) {
  const int n = va - vb;
  if (n <= 0) return;
  if (b - a <= tol) {
    out.push_back(0.5 * (a + b));
    return;
  }
  const double mid = 0.5 * (a + b);
  const int vm = sc.sign_changes(mid);
  isolate(sc, a, mid, va, vm, tol, out);
  isolate(sc, mid, b, vm, vb, tol, out);
}

}  // namespace

double horner(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(std::span<const double> coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs[k];
  return d;
}

std::vector<double> antiderivative(std::span<const double> coeffs) {
  std::vector<double> a(coeffs.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) a[k + 1] = coeffs[k] / static_cast<double>(k + 1);
  return a;
}

double integrate(std::span<const double> coeffs, double lo, double hi) {
  const auto anti = antiderivative(coeffs);
  return horner(anti, hi) - horner(anti, lo);
}

std::vector<double> affine_compose(std::span<const double> coeffs, double origin, double width) {
  // Horner in the polynomial ring: q <- q * (origin + width*u) + c_k.
  std::vector<double> q;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      next[i] += origin * q[i];
      next[i + 1] += width * q[i];
    }
    next[0] += *it;
    q = std::move(next);
  }
  if (q.size() > coeffs.size()) q.resize(coeffs.size());
  return q;
}

std::vector<double> trimmed(std::span<const double> coeffs, double rel_tol) {
  const double cutoff = rel_tol * max_abs(coeffs);
  std::size_t n = coeffs.size();
  while (n > 0 && (coeffs[n - 1] == 0.0 || std::abs(coeffs[n - 1]) <= cutoff)) --n;
  return {coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<double> roots_in_interval(std::span<const double> coeffs, double lo, double hi,
                                      double tol) {
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  // Work on [0, 1] for conditioning, then map back.
  const auto q = trimmed(affine_compose(coeffs, lo, hi - lo), 1e-15);
  if (q.size() <= 1) return roots;
  const SturmChain sc(q);
  std::vector<double> unit_roots;
  isolate(sc, 0.0, 1.0, sc.sign_changes(0.0), sc.sign_changes(1.0), tol, unit_roots);
  for (double u : unit_roots) {
    // A root sitting on the right endpoint is a boundary, not an interior split.
    if (u <= 0.0 || u >= 1.0 - tol) continue;
    roots.push_back(lo + (hi - lo) * u);
  }
  return roots;
}

double integrate_abs(std::span<const double> coeffs, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const double width = hi - lo;
  const auto q = trimmed(affine_compose(coeffs, lo, width), 1e-15);
  if (q.empty()) return 0.0;
  const auto anti = antiderivative(q);
  if (q.size() == 1) return width * std::abs(q[0]);

  std::vector<double> cuts{0.0};
  for (double x : roots_in_interval(q, 0.0, 1.0)) cuts.push_back(x);
  cuts.push_back(1.0);

  double total = 0.0;
  double prev = horner(anti, cuts.front());
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double cur = horner(anti, cuts[i]);
    total += std::abs(cur - prev);
    prev = cur;
  }
  return width * total;
}

}  // namespace l1sketch::poly
