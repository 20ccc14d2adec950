#include "l1sketch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <exception>
#include <mutex>
#include <thread>

#include "l1sketch/ci1.hpp"
#include "l1sketch/errors.hpp"
#include "l1sketch/polynomial.hpp"

namespace l1sketch {
namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Per-replicate working state: increments Z (s-1 x dim) are folded straight
// into prefix sums Y (s x dim).
class ReplicateWorker {
 public:
  ReplicateWorker(const DensityFamily& family, const SketchOptions& options)
      : family_(family),
        options_(options),
        dim_(options.mode == SketchMode::uniform_fastpath ? 1 : static_cast<std::size_t>(family.degree) + 1),
        prefix_(family.breakpoints.size() * dim_, 0.0),
        unit_(dim_),
        scaled_(dim_),
        rescaler_(static_cast<int>(dim_) - 1) {}

  void run(std::size_t rep, SketchMatrix& out) {
    RandomStream rng(options_.seed, rep);
    const auto& bp = family_.breakpoints;
    const std::size_t intervals = bp.size() - 1;
    std::fill(prefix_.begin(), prefix_.begin() + static_cast<std::ptrdiff_t>(dim_), 0.0);
    for (std::size_t l = 0; l < intervals; ++l) {
      draw_increment(bp[l], bp[l + 1], rng);
      const double* prev = &prefix_[l * dim_];
      double* next = &prefix_[(l + 1) * dim_];
      for (std::size_t k = 0; k < dim_; ++k) next[k] = prev[k] + scaled_[k];
    }
    for (std::size_t j = 0; j < family_.size(); ++j) {
      double x = 0.0;
      for (const auto& seg : family_.densities[j].segments) {
        const double* yb = &prefix_[seg.b * dim_];
        const double* yc = &prefix_[seg.c * dim_];
        for (std::size_t k = 0; k < dim_; ++k) x += seg.coeffs[k] * (yc[k] - yb[k]);
      }
      out.values[j * out.t + rep] = x;
    }
  }

 private:
  void draw_increment(double a, double b, RandomStream& rng) {
    switch (options_.mode) {
      case SketchMode::uniform_fastpath:
      case SketchMode::uniformize:
        scaled_[0] = (b - a) * sample_std_cauchy(rng);
        return;
      case SketchMode::exact_ci1: {
        const CI1Sample z = rescale_ci1(sample_ci1_unit(rng), a, b);
        scaled_[0] = z.x0;
        scaled_[1] = z.x1;
        return;
      }
      case SketchMode::cid_approx:
        sample_cid_approx_unit(options_.r, rng, unit_);
        rescaler_.apply(unit_, a, b, scaled_);
        return;
    }
  }

  const DensityFamily& family_;
  const SketchOptions& options_;
  std::size_t dim_;
  std::vector<double> prefix_;
  std::vector<double> unit_;
  std::vector<double> scaled_;
  CIdRescaler rescaler_;
};

void check_mode(const DensityFamily& family, SketchMode mode) {
  const int d = family.degree;
  const bool ok = (mode == SketchMode::uniform_fastpath && d == 0) ||
                  (mode == SketchMode::exact_ci1 && d == 1) ||
                  (mode == SketchMode::cid_approx && d >= 1) || mode == SketchMode::uniformize;
  if (!ok) {
    std::ostringstream os;
    os << "sketch mode " << to_string(mode) << " is incompatible with degree " << d;
    throw ParameterError(os.str());
  }
}

}  // namespace

std::string_view to_string(SketchMode mode) {
  switch (mode) {
    case SketchMode::exact_ci1: return "exact_ci1";
    case SketchMode::cid_approx: return "cid_approx";
    case SketchMode::uniform_fastpath: return "uniform_fastpath";
    case SketchMode::uniformize: return "uniformize";
  }
  return "unknown";
}

std::optional<SketchMode> parse_sketch_mode(std::string_view name) {
  if (name == "exact_ci1") return SketchMode::exact_ci1;
  if (name == "cid_approx") return SketchMode::cid_approx;
  if (name == "uniform_fastpath") return SketchMode::uniform_fastpath;
  if (name == "uniformize") return SketchMode::uniformize;
  return std::nullopt;
}

DensityFamily uniformize_family(const DensityFamily& family, std::size_t pieces) {
  if (pieces == 0) throw ParameterError("uniformize: need at least one piece per interval");
  const auto& bp = family.breakpoints;
  std::vector<double> grid;
  grid.reserve((bp.size() - 1) * pieces + 1);
  for (std::size_t l = 0; l + 1 < bp.size(); ++l) {
    const double a = bp[l];
    const double w = bp[l + 1] - a;
    for (std::size_t p = 0; p < pieces; ++p)
      grid.push_back(a + w * static_cast<double>(p) / static_cast<double>(pieces));
  }
  grid.push_back(bp[bp.size() - 1]);
  // Rounding can collapse neighbours when pieces is huge relative to width.
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  Breakpoints fine(grid);

  std::vector<PiecewisePolyDensity> out;
  out.reserve(family.size());
  for (const auto& f : family.densities) {
    PiecewisePolyDensity g{f.name, {}, 0};
    for (const auto& seg : f.segments) {
      const auto b = static_cast<std::size_t>(
          std::lower_bound(grid.begin(), grid.end(), bp[seg.b]) - grid.begin());
      const auto c = static_cast<std::size_t>(
          std::lower_bound(grid.begin(), grid.end(), bp[seg.c]) - grid.begin());
      for (std::size_t l = b; l < c; ++l) {
        const double avg = poly::integrate(seg.coeffs, grid[l], grid[l + 1]) / (grid[l + 1] - grid[l]);
        g.segments.push_back({l, l + 1, {avg}});
      }
    }
    out.push_back(std::move(g));
  }
  return {std::move(fine), std::move(out), 0};
}

SketchMatrix sketch_family(const DensityFamily& family, const SketchOptions& options) {
  check_mode(family, options.mode);
  if (options.t == 0) throw ParameterError("sketch needs t >= 1");
  if (options.r == 0) throw ParameterError("sketch needs r >= 1");

  if (options.mode == SketchMode::uniformize) {
    const DensityFamily coarse = uniformize_family(family, options.r);
    SketchOptions inner = options;
    inner.mode = SketchMode::uniform_fastpath;
    SketchMatrix out = sketch_family(coarse, inner);
    out.mode = SketchMode::uniformize;
    return out;
  }

  SketchMatrix out{family.size(), options.t, options.mode,
                   std::vector<double>(family.size() * options.t, 0.0)};
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(options.threads, 1, options.t));
  auto run_range = [&](std::size_t begin, std::size_t end) {
    ReplicateWorker worker(family, options);
    for (std::size_t rep = begin; rep < end; ++rep) worker.run(rep, out);
  };
  if (workers == 1) {
    run_range(0, options.t);
    return out;
  }
  // Each worker owns a contiguous block of columns; no shared writes.
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (options.t + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(options.t, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        run_range(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

DistanceMatrix estimate_all_pairs(const SketchMatrix& sketch, std::vector<std::string> names,
                                  double epsilon, double delta, Estimator estimator) {
  if (names.size() != sketch.m) throw ParameterError("estimate_all_pairs: name count differs from m");
  const std::size_t required = required_sample_count(epsilon, delta, std::max<std::size_t>(sketch.m, 2));
  if (sketch.t < required) {
    std::ostringstream os;
    os << "t = " << sketch.t << " replicates is below the " << required
       << " required for epsilon = " << epsilon << ", delta = " << delta;
    throw ParameterError(os.str());
  }
  DistanceMatrix out(std::move(names), DistanceMethod::sketch);
  std::vector<double> diff(sketch.t);
  for (std::size_t j = 0; j < sketch.m; ++j) {
    const auto rj = sketch.row(j);
    for (std::size_t k = j + 1; k < sketch.m; ++k) {
      const auto rk = sketch.row(k);
      for (std::size_t i = 0; i < sketch.t; ++i) diff[i] = rj[i] - rk[i];
      out.set(j, k, estimate_scale(estimator, diff, epsilon, delta).value);
    }
  }
  auto& echo = out.echo();
  echo.epsilon = epsilon;
  echo.delta = delta;
  echo.t = sketch.t;
  return out;
}

std::size_t mc_sample_count(double epsilon_abs, double delta, std::size_t m) {
  if (!(epsilon_abs > 0.0 && epsilon_abs <= 2.0)) throw ParameterError("absolute epsilon must lie in (0, 2]");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  const double md = static_cast<double>(std::max<std::size_t>(m, 2));
  const double raw = 8.0 / (epsilon_abs * epsilon_abs) * std::log(2.0 * md * md / delta);
  return static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-13)));
}

DistanceMatrix mc_all_pairs(const DensityFamily& family, double epsilon_abs, double delta,
                            std::uint64_t seed) {
  const auto warnings = validate_family(family, true);
  if (!warnings.empty()) {
    std::string msg = "monte carlo baseline needs nonnegative unit-mass densities:";
    for (const auto& w : warnings) msg += "\n  " + w;
    throw ValidationError(msg);
  }
  const std::size_t m = family.size();
  const std::size_t n = mc_sample_count(epsilon_abs, delta, m);
  const auto& bp = family.breakpoints;

  // sign_mean[j * m + k] = mean over X ~ f_j of sgn(f_j(X) - f_k(X)).
  std::vector<double> sign_mean(m * m, 0.0);
  std::vector<double> values(m);
  for (std::size_t j = 0; j < m; ++j) {
    const DensitySampler sampler(family.densities[j], bp);
    RandomStream rng(seed, j);
    std::vector<long long> sums(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = sampler(rng);
      for (std::size_t k = 0; k < m; ++k) values[k] = eval_density(family.densities[k], bp, x);
      for (std::size_t k = 0; k < m; ++k) sums[k] += (values[j] > values[k]) - (values[j] < values[k]);
    }
    for (std::size_t k = 0; k < m; ++k) sign_mean[j * m + k] = static_cast<double>(sums[k]) / static_cast<double>(n);
  }

  DistanceMatrix out(family.names(), DistanceMethod::mc);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k)
      out.set(j, k, std::clamp(sign_mean[j * m + k] + sign_mean[k * m + j], 0.0, 2.0));
  auto& echo = out.echo();
  echo.epsilon = epsilon_abs;
  echo.delta = delta;
  echo.seed = seed;
  echo.extra.emplace_back("samples_per_density", std::to_string(n));
  return out;
}

DistanceMatrix run_scheme(const DensityFamily& family, const SchemeConfig& config) {
  validate_family(family, false);
  switch (config.method) {
    case DistanceMethod::exact:
      return exact_all_pairs(family);
    case DistanceMethod::mc:
      return mc_all_pairs(family, config.epsilon, config.delta, config.seed);
    case DistanceMethod::sketch:
      break;
  }

  if (!(config.epsilon > 0.0 && config.epsilon <= 0.5))
    throw ParameterError("sketch needs epsilon in (0, 1/2], got " + format_double(config.epsilon));
  const int d = family.degree;
  SketchMode mode = d == 0 ? SketchMode::uniform_fastpath
                           : d == 1 ? SketchMode::exact_ci1 : SketchMode::cid_approx;
  if (config.sketch_mode) mode = *config.sketch_mode;
  check_mode(family, mode);

  const bool approximate = (mode == SketchMode::cid_approx || mode == SketchMode::uniformize) && d >= 1;
  const double eps_est = approximate ? config.epsilon / 2.0 : config.epsilon;
  const double eps_int = config.epsilon / 2.0;

  SketchOptions options;
  options.mode = mode;
  options.seed = config.seed;
  options.threads = config.threads;
  const std::size_t m = std::max<std::size_t>(family.size(), 2);
  const std::size_t required = required_sample_count(eps_est, config.delta, m);
  options.t = config.t.value_or(required);
  if (approximate) options.r = ApproxConfig::from_epsilon(d, eps_int, config.c_constant).r;

  const SketchMatrix sketch = sketch_family(family, options);
  DistanceMatrix out = estimate_all_pairs(sketch, family.names(), eps_est, config.delta, config.estimator);

  auto& echo = out.echo();
  echo.epsilon = config.epsilon;
  echo.delta = config.delta;
  echo.t = options.t;
  echo.seed = config.seed;
  echo.extra.emplace_back("mode", std::string(to_string(mode)));
  echo.extra.emplace_back("estimator", std::string(to_string(config.estimator)));
  if (approximate) {
    echo.extra.emplace_back("r", std::to_string(options.r));
    echo.extra.emplace_back("c", format_double(config.c_constant));
    echo.extra.emplace_back("epsilon_integration", format_double(eps_int));
    echo.extra.emplace_back("epsilon_estimation", format_double(eps_est));
    // The two relative errors compound rather than add to a clean 1 +- eps.
    echo.extra.emplace_back("guarantee", "(1 +- " + format_double(eps_int) + ")(1 +- " +
                                             format_double(eps_est) + ")");
  }
  return out;
}

}  // namespace l1sketch
