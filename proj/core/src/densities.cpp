#include "l1sketch/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "l1sketch/errors.hpp"
#include "l1sketch/polynomial.hpp"

namespace l1sketch {
namespace {

constexpr double kMassTolerance = 1e-6;
constexpr double kNegativityTolerance = 1e-12;

std::string density_label(const PiecewisePolyDensity& f, std::size_t index) {
  std::ostringstream os;
  os << "density " << index;
  if (!f.name.empty()) os << " ('" << f.name << "')";
  return os.str();
}

std::vector<double> padded(const std::vector<double>& coeffs, std::size_t len) {
  std::vector<double> out(len, 0.0);
  std::copy(coeffs.begin(), coeffs.end(), out.begin());
  return out;
}

}  // namespace

Breakpoints::Breakpoints(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ValidationError("breakpoints: need at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw ValidationError("breakpoints: non-finite value");
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      std::ostringstream os;
      os << "breakpoints: not strictly increasing at index " << i;
      throw ValidationError(os.str());
    }
  }
}

std::optional<std::size_t> Breakpoints::interval_of(double x) const {
  if (!(x >= points_.front()) || !(x < points_.back())) return std::nullopt;
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

std::vector<std::string> DensityFamily::names() const {
  std::vector<std::string> out;
  out.reserve(densities.size());
  for (const auto& f : densities) out.push_back(f.name);
  return out;
}

std::vector<std::string> validate_family(const DensityFamily& family, bool strict) {
  const int d = family.degree;
  if (d < 0 || d > kMaxDegree) {
    std::ostringstream os;
    os << "degree " << d << " outside [0, " << kMaxDegree << "]";
    throw ValidationError(os.str());
  }
  const std::size_t s = family.breakpoints.size();
  std::vector<std::string> warnings;

  for (std::size_t j = 0; j < family.densities.size(); ++j) {
    const auto& f = family.densities[j];
    const auto label = density_label(f, j);
    if (f.degree != d) throw ValidationError(label + ": degree differs from family degree");
    for (std::size_t i = 0; i < f.segments.size(); ++i) {
      const auto& seg = f.segments[i];
      std::ostringstream where;
      where << label << ", segment " << i;
      if (!(seg.b < seg.c)) throw ValidationError(where.str() + ": empty index range (b >= c)");
      if (seg.c > s - 1) throw ValidationError(where.str() + ": breakpoint index out of range");
      if (seg.coeffs.size() != static_cast<std::size_t>(d) + 1)
        throw ValidationError(where.str() + ": coefficient count must be degree + 1");
      for (double v : seg.coeffs)
        if (!std::isfinite(v)) throw ValidationError(where.str() + ": non-finite coefficient");
      if (i > 0 && seg.b < f.segments[i - 1].c)
        throw ValidationError(where.str() + ": overlaps or precedes previous segment");
    }
  }
  if (!strict) return warnings;

  const int nodes = 2 * d + 1;
  for (std::size_t j = 0; j < family.densities.size(); ++j) {
    const auto& f = family.densities[j];
    const auto label = density_label(f, j);
    double mass = 0.0;
    for (std::size_t i = 0; i < f.segments.size(); ++i) {
      const auto& seg = f.segments[i];
      const double lo = family.breakpoints[seg.b];
      const double hi = family.breakpoints[seg.c];
      mass += poly::integrate(seg.coeffs, lo, hi);

      std::vector<double> probes{lo, hi};
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      for (int k = 0; k < nodes; ++k)
        probes.push_back(mid + half * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * nodes)));
      double scale = 0.0;
      for (double v : seg.coeffs) scale = std::max(scale, std::abs(v));
      for (double x : probes) {
        if (poly::horner(seg.coeffs, x) < -kNegativityTolerance * (1.0 + scale)) {
          std::ostringstream os;
          os << label << ", segment " << i << ": negative value near x = " << x;
          warnings.push_back(os.str());
          break;
        }
      }
    }
    if (std::abs(mass - 1.0) > kMassTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << label << ": total mass " << mass << " differs from 1";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

double eval_density(const PiecewisePolyDensity& f, const Breakpoints& bp, double x) {
  const auto l = bp.interval_of(x);
  if (!l) return 0.0;
  // First segment whose end index exceeds l.
  const auto it = std::upper_bound(f.segments.begin(), f.segments.end(), *l,
                                   [](std::size_t v, const PolySegment& s) { return v < s.c; });
  if (it == f.segments.end() || it->b > *l) return 0.0;
  return poly::horner(it->coeffs, x);
}

double density_mass(const PiecewisePolyDensity& f, const Breakpoints& bp) {
  double mass = 0.0;
  for (const auto& seg : f.segments) mass += poly::integrate(seg.coeffs, bp[seg.b], bp[seg.c]);
  return mass;
}

DensityFamily merge_breakpoints(std::span<const RawDensity> raw) {
  std::size_t width = 1;
  std::vector<double> grid;
  std::vector<std::vector<RawSegment>> sorted(raw.size());

  for (std::size_t j = 0; j < raw.size(); ++j) {
    auto segs = raw[j].segments;
    for (const auto& seg : segs) {
      if (!std::isfinite(seg.lo) || !std::isfinite(seg.hi))
        throw ValidationError("density '" + raw[j].name + "': non-finite endpoint");
      if (!(seg.lo < seg.hi))
        throw ValidationError("density '" + raw[j].name + "': segment with lo >= hi");
      if (seg.coeffs.empty())
        throw ValidationError("density '" + raw[j].name + "': segment without coefficients");
      width = std::max(width, seg.coeffs.size());
      grid.push_back(seg.lo);
      grid.push_back(seg.hi);
    }
    std::sort(segs.begin(), segs.end(),
              [](const RawSegment& a, const RawSegment& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].lo < segs[i - 1].hi)
        throw ValidationError("density '" + raw[j].name + "': overlapping segments");
    sorted[j] = std::move(segs);
  }
  if (static_cast<int>(width) - 1 > kMaxDegree) throw ValidationError("degree exceeds cap");

  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  Breakpoints bp(grid);

  const int degree = static_cast<int>(width) - 1;
  std::vector<PiecewisePolyDensity> densities;
  densities.reserve(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    PiecewisePolyDensity f{raw[j].name, {}, degree};
    for (const auto& seg : sorted[j]) {
      const auto b = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), seg.lo) - grid.begin());
      const auto c = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), seg.hi) - grid.begin());
      const auto coeffs = padded(seg.coeffs, width);
      for (std::size_t l = b; l < c; ++l) f.segments.push_back({l, l + 1, coeffs});
    }
    densities.push_back(std::move(f));
  }
  return {std::move(bp), std::move(densities), degree};
}

std::vector<const std::vector<double>*> coefficients_by_interval(const PiecewisePolyDensity& f,
                                                                 const Breakpoints& bp) {
  std::vector<const std::vector<double>*> out(bp.size() - 1, nullptr);
  for (const auto& seg : f.segments)
    for (std::size_t l = seg.b; l < seg.c; ++l) out[l] = &seg.coeffs;
  return out;
}

namespace {

double l1_from_tables(const std::vector<const std::vector<double>*>& f,
                      const std::vector<const std::vector<double>*>& g, const Breakpoints& bp) {
  double total = 0.0;
  std::vector<double> diff;
  for (std::size_t l = 0; l < f.size(); ++l) {
    if (!f[l] && !g[l]) continue;
    const std::size_t len = std::max(f[l] ? f[l]->size() : 0, g[l] ? g[l]->size() : 0);
    diff.assign(len, 0.0);
    if (f[l])
      for (std::size_t k = 0; k < f[l]->size(); ++k) diff[k] += (*f[l])[k];
    if (g[l])
      for (std::size_t k = 0; k < g[l]->size(); ++k) diff[k] -= (*g[l])[k];
    total += poly::integrate_abs(diff, bp[l], bp[l + 1]);
  }
  return total;
}

}  // namespace

double exact_l1_distance(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g,
                         const Breakpoints& bp) {
  return l1_from_tables(coefficients_by_interval(f, bp), coefficients_by_interval(g, bp), bp);
}

DistanceMatrix exact_all_pairs(const DensityFamily& family) {
  DistanceMatrix out(family.names(), DistanceMethod::exact);
  std::vector<std::vector<const std::vector<double>*>> tables;
  tables.reserve(family.size());
  for (const auto& f : family.densities) tables.push_back(coefficients_by_interval(f, family.breakpoints));
  for (std::size_t j = 0; j < family.size(); ++j)
    for (std::size_t k = j + 1; k < family.size(); ++k)
      out.set(j, k, l1_from_tables(tables[j], tables[k], family.breakpoints));
  return out;
}

DensitySampler::DensitySampler(const PiecewisePolyDensity& f, const Breakpoints& bp) {
  double total = 0.0;
  for (const auto& seg : f.segments) {
    Piece p{bp[seg.b], bp[seg.c], 0.0, 0.0, poly::antiderivative(seg.coeffs)};
    p.cdf_lo = poly::horner(p.antiderivative, p.lo);
    p.mass = poly::horner(p.antiderivative, p.hi) - p.cdf_lo;
    total += std::max(p.mass, 0.0);
    pieces_.push_back(std::move(p));
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) throw ParameterError("sample_from_density: total mass is not positive");
}

double DensitySampler::operator()(RandomStream& rng) const {
  const double pick = rng.uniform_open() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
  if (it == cumulative_.end()) --it;
  const Piece& p = pieces_[static_cast<std::size_t>(it - cumulative_.begin())];

  const double target = rng.uniform_open() * p.mass;
  const double tol = 1e-12 * std::abs(p.mass);
  double lo = p.lo;
  double hi = p.hi;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double diff = poly::horner(p.antiderivative, mid) - p.cdf_lo - target;
    if (std::abs(diff) <= tol || mid <= lo || mid >= hi) break;
    (diff < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

double sample_from_density(const PiecewisePolyDensity& f, const Breakpoints& bp, RandomStream& rng) {
  return DensitySampler(f, bp)(rng);
}

}  // namespace l1sketch
