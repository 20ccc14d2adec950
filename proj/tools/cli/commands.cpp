#include "cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cli/manifest.hpp"
#include "json.hpp"
#include "l1sketch/l1sketch.hpp"

namespace l1sketch::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Grid {
  double lo = 0.0;
  double step = 1.0;
  std::size_t points = 1;

  double operator[](std::size_t i) const { return lo + step * static_cast<double>(i); }
};

// "lo:hi:step", both ends inclusive.
Grid parse_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (b == std::string::npos) throw ParameterError("grid must look like lo:hi:step, got '" + spec + "'");
  double v[3];
  const std::string parts[3] = {spec.substr(0, a), spec.substr(a + 1, b - a - 1), spec.substr(b + 1)};
  for (int i = 0; i < 3; ++i) {
    const auto* end = parts[i].data() + parts[i].size();
    const auto res = std::from_chars(parts[i].data(), end, v[i]);
    if (res.ec != std::errc{} || res.ptr != end) throw ParameterError("grid: cannot parse '" + parts[i] + "'");
  }
  if (!(v[2] > 0.0) || !(v[1] >= v[0]) || !std::isfinite(v[1] - v[0]))
    throw ParameterError("grid needs finite lo <= hi and step > 0");
  const double count = std::floor((v[1] - v[0]) / v[2] + 1e-9) + 1.0;
  if (count > 1e7) throw ParameterError("grid has too many points");
  return {v[0], v[2], static_cast<std::size_t>(count)};
}

std::uint64_t default_seed() {
  const char* env = std::getenv("L1SKETCH_SEED");
  if (!env || !*env) return 0;
  std::uint64_t seed = 0;
  const auto* end = env + std::char_traits<char>::length(env);
  const auto res = std::from_chars(env, end, seed);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParameterError(std::string("L1SKETCH_SEED is not an unsigned integer: ") + env);
  return seed;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << text;
  if (!f.flush()) throw std::runtime_error("failed writing " + path);
}

std::string comment_block(const Annotations& a) {
  std::string s;
  for (const auto& [k, v] : a) s += "# " + k + ": " + v + "\n";
  return s;
}

void report_time(std::ostream& err, const char* command, Clock::time_point start) {
  const std::chrono::duration<double> el = Clock::now() - start;
  err << command << ": wall time " << el.count() << " s\n";
}

// ---- dist ------------------------------------------------------------------

struct DistArgs {
  std::string input;
  std::string method = "exact";
  double epsilon = 0.2;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  unsigned threads = 1;
  std::string estimator = "geometric_mean";
  std::size_t t = 0;
  double c = kDefaultCConstant;
  std::string sketch_mode;
};

int cmd_dist(const DistArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  SchemeConfig cfg;
  if (a.method == "exact") cfg.method = DistanceMethod::exact;
  else if (a.method == "sketch") cfg.method = DistanceMethod::sketch;
  else cfg.method = DistanceMethod::mc;
  cfg.epsilon = a.epsilon;
  cfg.delta = a.delta;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.estimator = *parse_estimator(a.estimator);
  cfg.c_constant = a.c;
  if (a.t) cfg.t = a.t;
  if (!a.sketch_mode.empty()) cfg.sketch_mode = parse_sketch_mode(a.sketch_mode);

  const std::string bytes = read_bytes(a.input);
  const DensityFamily family = parse_family_json(bytes);
  for (const auto& w : validate_family(family, true)) err << "warning: " << w << "\n";

  const DistanceMatrix dm = run_scheme(family, cfg);

  RunManifest manifest("dist", a.seed);
  manifest.set_input(a.input, bytes);
  manifest.add("method", a.method);
  manifest.add_echo(dm.echo());
  const std::string text = a.format == "json" ? distance_matrix_json(dm, manifest.entries())
                                              : distance_matrix_csv(dm, manifest.entries());
  emit(text, a.out, out);
  report_time(err, "dist", start);
  return kExitOk;
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
  std::size_t count = 1;
  double a = 0.0;
  double b = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  int d = 2;
  std::size_t r = 0;
  double eps = 0.05;
  double c = kDefaultCConstant;
};

// Rows go to stdout bare (pipe friendly); a file additionally gets the
// manifest as leading comment lines.
std::string sample_text(const RunManifest& m, const std::string& path, const std::string& rows) {
  return path.empty() ? rows : comment_block(m.entries()) + rows;
}

int cmd_sample_ci1(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  if (!(a.b > a.a)) throw ParameterError("sample ci1 needs b > a");
  RandomStream rng(a.seed, 0);
  RejectionStats stats;
  std::string rows;
  for (std::size_t i = 0; i < a.count; ++i) {
    const auto z = rescale_ci1(sample_ci1_unit(rng, &stats), a.a, a.b);
    rows += format_shortest(z.x0) + "," + format_shortest(z.x1) + "\n";
  }
  RunManifest m("sample ci1", a.seed);
  m.add("count", std::to_string(a.count));
  m.add("a", a.a);
  m.add("b", a.b);
  emit(sample_text(m, a.out, rows), a.out, out);
  if (stats.proposals)
    err << "sample ci1: acceptance rate "
        << static_cast<double>(stats.accepted) / static_cast<double>(stats.proposals) << "\n";
  report_time(err, "sample ci1", start);
  return kExitOk;
}

int cmd_sample_cid(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const ApproxConfig cfg = a.r ? ApproxConfig::with_terms(a.d, a.r, a.c) : ApproxConfig::from_epsilon(a.d, a.eps, a.c);
  const CIdRescaler rescaler(a.d);
  RandomStream rng(a.seed, 0);
  std::vector<double> unit(static_cast<std::size_t>(a.d) + 1), z(unit.size());
  std::string rows;
  for (std::size_t i = 0; i < a.count; ++i) {
    sample_cid_approx_unit(cfg.r, rng, unit);
    rescaler.apply(unit, a.a, a.b, z);
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (k) rows += ',';
      rows += format_shortest(z[k]);
    }
    rows += '\n';
  }
  RunManifest m("sample cid", a.seed);
  m.add("count", std::to_string(a.count));
  m.add("d", std::to_string(a.d));
  m.add("r", std::to_string(cfg.r));
  m.add("a", a.a);
  m.add("b", a.b);
  emit(sample_text(m, a.out, rows), a.out, out);
  report_time(err, "sample cid", start);
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string grid = "-3:3:0.05";
  std::string out;
  std::string input;
  std::string name;
};

int cmd_eval_ci1(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Grid g = parse_grid(a.grid);
  std::string rows = "x0,x1,f\n";
  for (std::size_t i = 0; i < g.points; ++i)
    for (std::size_t k = 0; k < g.points; ++k)
      rows += format_shortest(g[i]) + "," + format_shortest(g[k]) + "," + format_shortest(ci1_density(g[i], g[k])) + "\n";
  RunManifest m("eval ci1-density", 0);
  m.add("grid", a.grid);
  emit(sample_text(m, a.out, rows), a.out, out);
  report_time(err, "eval ci1-density", start);
  return kExitOk;
}

int cmd_eval_density(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Grid g = parse_grid(a.grid);
  const std::string bytes = read_bytes(a.input);
  const DensityFamily family = parse_family_json(bytes);
  std::vector<std::size_t> which;
  for (std::size_t j = 0; j < family.size(); ++j)
    if (a.name.empty() || family.densities[j].name == a.name) which.push_back(j);
  if (which.empty()) throw ParameterError("no density named '" + a.name + "'");

  std::string rows = "x";
  for (auto j : which) rows += "," + family.densities[j].name;
  rows += '\n';
  for (std::size_t i = 0; i < g.points; ++i) {
    rows += format_shortest(g[i]);
    for (auto j : which) rows += "," + format_shortest(eval_density(family.densities[j], family.breakpoints, g[i]));
    rows += '\n';
  }
  RunManifest m("eval density", 0);
  m.set_input(a.input, bytes);
  m.add("grid", a.grid);
  emit(sample_text(m, a.out, rows), a.out, out);
  report_time(err, "eval density", start);
  return kExitOk;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  int d_max = 5;
  double eps = 0.05;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  RandomStream rng(a.seed, 0);
  const CalibrationResult cal = calibrate_c(a.d_max, a.eps, a.trials, rng);
  nlohmann::ordered_json doc;
  doc["c"] = cal.c;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& d : cal.per_degree)
    per[std::to_string(d.d)] = {{"r_min", d.r_min}, {"c_d", d.c_d}, {"max_bernstein_ratio", d.max_bernstein_ratio}};
  doc["per_degree"] = std::move(per);
  RunManifest m("calibrate", a.seed);
  m.add("d_max", std::to_string(a.d_max));
  m.add("eps", a.eps);
  m.add("trials", std::to_string(a.trials));
  nlohmann::ordered_json man = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.entries()) man[k] = v;
  doc["manifest"] = std::move(man);
  emit(doc.dump(2) + "\n", a.out, out);
  report_time(err, "calibrate", start);
  return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::size_t m = 10;
  std::size_t n = 8;
  int d = 1;
  std::vector<std::size_t> t{1000, 4000, 16000};
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

// m unit-mass densities of n contiguous pieces on random endpoints in
// [0, 4]. Pieces are sum_k beta_k u^k with beta_k > 0 in local u, hence
// nonnegative.
DensityFamily bench_family(const BenchArgs& a, RandomStream& rng) {
  std::vector<RawDensity> raw;
  for (std::size_t j = 0; j < a.m; ++j) {
    std::vector<double> ends(a.n + 1);
    for (auto& e : ends) e = 4.0 * rng.uniform_open();
    std::sort(ends.begin(), ends.end());
    RawDensity f{"f" + std::to_string(j), {}};
    double mass = 0.0;
    for (std::size_t i = 0; i < a.n; ++i) {
      const double lo = ends[i], hi = ends[i + 1];
      std::vector<double> beta(static_cast<std::size_t>(a.d) + 1);
      for (std::size_t k = 0; k < beta.size(); ++k) {
        beta[k] = 0.05 + rng.uniform_open();
        mass += (hi - lo) * beta[k] / static_cast<double>(k + 1);
      }
      f.segments.push_back({lo, hi, poly::affine_compose(beta, -lo / (hi - lo), 1.0 / (hi - lo))});
    }
    for (auto& seg : f.segments)
      for (double& c : seg.coeffs) c /= mass;
    raw.push_back(std::move(f));
  }
  return merge_breakpoints(raw);
}

int cmd_bench(BenchArgs a, std::ostream& out, std::ostream& err) {
  if (a.m < 2 || a.n < 1) throw ParameterError("bench needs m >= 2 and n >= 1");
  if (a.t.empty()) throw ParameterError("bench needs at least one t");
  std::sort(a.t.begin(), a.t.end());
  RandomStream rng(a.seed, 0);
  const DensityFamily family = bench_family(a, rng);
  const SketchMode mode = a.d == 0 ? SketchMode::uniform_fastpath
                                   : a.d == 1 ? SketchMode::exact_ci1 : SketchMode::cid_approx;

  std::string rows = "method,m,n,d,t,seconds\n";
  auto row = [&](const char* method, std::size_t t, double seconds) {
    std::ostringstream os;
    os << method << ',' << a.m << ',' << a.n << ',' << a.d << ',' << t << ',' << seconds << '\n';
    rows += os.str();
  };
  {
    const auto start = Clock::now();
    const auto dm = exact_all_pairs(family);
    const std::chrono::duration<double> el = Clock::now() - start;
    row("exact", 0, el.count());
  }
  for (std::size_t t : a.t) {
    SketchOptions o;
    o.mode = mode;
    o.t = t;
    o.seed = a.seed;
    o.threads = a.threads;
    if (a.d >= 2) o.r = ApproxConfig::from_epsilon(a.d, 0.1, kDefaultCConstant).r;
    const auto start = Clock::now();
    const SketchMatrix s = sketch_family(family, o);
    std::vector<double> diff(t);
    double sink = 0.0;
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t k = j + 1; k < s.m; ++k) {
        for (std::size_t i = 0; i < t; ++i) diff[i] = s(j, i) - s(k, i);
        sink += geometric_mean_estimate(diff, 0.5, 0.5).value;
      }
    const std::chrono::duration<double> el = Clock::now() - start;
    if (!std::isfinite(sink)) err << "bench: non-finite estimate\n";
    row("sketch", t, el.count());
  }
  RunManifest m("bench", a.seed);
  m.add("m", std::to_string(a.m));
  m.add("n", std::to_string(a.n));
  m.add("d", std::to_string(a.d));
  emit(comment_block(m.entries()) + rows, a.out, out);
  return kExitOk;
}

// ---- canon -----------------------------------------------------------------

int cmd_canon(const std::string& input, const std::string& path, std::ostream& out) {
  emit(family_to_json(read_family_file(input)), path, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"All-pairs L1 distances between piecewise-polynomial densities", "l1sketch"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParameter;
  }

  DistArgs dist;
  dist.seed = seed;
  auto* dist_cmd = app.add_subcommand("dist", "All-pairs distance matrix of a density family");
  dist_cmd->add_option("input", dist.input, "Family JSON file")->required();
  dist_cmd->add_option("--method", dist.method)->check(CLI::IsMember({"exact", "sketch", "mc"}))->capture_default_str();
  dist_cmd->add_option("--epsilon", dist.epsilon, "Relative (sketch) or absolute (mc) error")->capture_default_str();
  dist_cmd->add_option("--delta", dist.delta, "Failure probability")->capture_default_str();
  dist_cmd->add_option("--seed", dist.seed, "Defaults to $L1SKETCH_SEED or 0");
  dist_cmd->add_option("--out", dist.out, "Output file (default stdout)");
  dist_cmd->add_option("--format", dist.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  dist_cmd->add_option("--threads", dist.threads)->check(CLI::Range(1u, 1024u))->capture_default_str();
  dist_cmd->add_option("--estimator", dist.estimator)
      ->check(CLI::IsMember({"geometric_mean", "median"}))
      ->capture_default_str();
  dist_cmd->add_option("--t", dist.t, "Replicates (default: minimum for epsilon, delta)");
  dist_cmd->add_option("--c", dist.c, "Constant c in r = c d^2 / eps")->capture_default_str();
  dist_cmd->add_option("--sketch-mode", dist.sketch_mode)
      ->check(CLI::IsMember({"exact_ci1", "cid_approx", "uniform_fastpath", "uniformize"}));

  SampleArgs sample;
  sample.seed = seed;
  auto* sample_cmd = app.add_subcommand("sample", "Draw stochastic-integral samples");
  sample_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--count", sample.count)->capture_default_str();
    c->add_option("--a", sample.a)->capture_default_str();
    c->add_option("--b", sample.b)->capture_default_str();
    c->add_option("--seed", sample.seed);
    c->add_option("--out", sample.out);
  };
  auto* ci1_cmd = sample_cmd->add_subcommand("ci1", "Exact CI_1(a,b) draws, rows x0,x1");
  add_common(ci1_cmd);
  auto* cid_cmd = sample_cmd->add_subcommand("cid", "r-approximation CI_d(a,b) draws");
  add_common(cid_cmd);
  cid_cmd->add_option("--d", sample.d)->capture_default_str();
  cid_cmd->add_option("--r", sample.r, "Riemann terms (default from --eps and --c)");
  cid_cmd->add_option("--eps", sample.eps)->capture_default_str();
  cid_cmd->add_option("--c", sample.c)->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate densities on a grid (plot data)");
  eval_cmd->require_subcommand(1);
  auto* eval_ci1 = eval_cmd->add_subcommand("ci1-density", "CI_1(0,1) density on a square grid");
  eval_ci1->add_option("--grid", eval.grid, "lo:hi:step")->capture_default_str();
  eval_ci1->add_option("--out", eval.out);
  auto* eval_dens = eval_cmd->add_subcommand("density", "Family densities on a 1-D grid");
  eval_dens->add_option("input", eval.input)->required();
  eval_dens->add_option("--name", eval.name, "Only this density");
  eval_dens->add_option("--grid", eval.grid, "lo:hi:step")->capture_default_str();
  eval_dens->add_option("--out", eval.out);

  CalibrateArgs cal;
  if (std::getenv("L1SKETCH_SEED")) cal.seed = seed;
  auto* cal_cmd = app.add_subcommand("calibrate", "Estimate the constant c of the r-approximation");
  cal_cmd->add_option("--d-max", cal.d_max)->check(CLI::Range(0, kMaxDegree))->capture_default_str();
  cal_cmd->add_option("--eps", cal.eps)->capture_default_str();
  cal_cmd->add_option("--trials", cal.trials)->capture_default_str();
  cal_cmd->add_option("--seed", cal.seed)->capture_default_str();
  cal_cmd->add_option("--out", cal.out);

  BenchArgs bench;
  bench.seed = seed;
  auto* bench_cmd = app.add_subcommand("bench", "Wall time of exact vs sketch as CSV");
  bench_cmd->add_option("--m", bench.m)->capture_default_str();
  bench_cmd->add_option("--n", bench.n)->capture_default_str();
  bench_cmd->add_option("--d", bench.d)->check(CLI::Range(0, kMaxDegree))->capture_default_str();
  bench_cmd->add_option("--t", bench.t, "Replicate counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--threads", bench.threads)->check(CLI::Range(1u, 1024u))->capture_default_str();
  bench_cmd->add_option("--out", bench.out);

  std::string canon_in, canon_out;
  auto* canon_cmd = app.add_subcommand("canon", "Rewrite a family file in canonical form");
  canon_cmd->add_option("input", canon_in)->required();
  canon_cmd->add_option("--out", canon_out);

  std::vector<const char*> argv{"l1sketch"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParameter;
  }

  try {
    if (*dist_cmd) return cmd_dist(dist, out, err);
    if (*ci1_cmd) return cmd_sample_ci1(sample, out, err);
    if (*cid_cmd) return cmd_sample_cid(sample, out, err);
    if (*eval_ci1) return cmd_eval_ci1(eval, out, err);
    if (*eval_dens) return cmd_eval_density(eval, out, err);
    if (*cal_cmd) return cmd_calibrate(cal, out, err);
    if (*bench_cmd) return cmd_bench(bench, out, err);
    if (*canon_cmd) return cmd_canon(canon_in, canon_out, out);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "invalid family: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace l1sketch::cli
