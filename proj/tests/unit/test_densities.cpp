#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "l1sketch/densities.hpp"
#include "l1sketch/errors.hpp"
#include "oracles.hpp"

using namespace l1sketch;
using namespace l1sketch::testing;

namespace {

DensityFamily single(std::vector<double> bp, std::vector<PolySegment> segs, int degree) {
  return {Breakpoints(std::move(bp)), {{"f", std::move(segs), degree}}, degree};
}

const RawDensity kRamp{"ramp", {{0.0, 1.0, {0.0, 2.0}}}};
const RawDensity kFlat{"flat", {{0.0, 1.0, {1.0, 0.0}}}};

}  // namespace

TEST_CASE("breakpoints validate their points") {
  CHECK_THROWS_AS(Breakpoints({0.0}), ValidationError);
  CHECK_THROWS_AS(Breakpoints({0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(Breakpoints({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(Breakpoints({0.0, INFINITY}), ValidationError);
  const Breakpoints bp({0.0, 1.0, 3.0});
  CHECK(bp.interval_of(0.0) == 0u);
  CHECK(bp.interval_of(1.0) == 1u);
  CHECK_FALSE(bp.interval_of(3.0).has_value());
  CHECK_FALSE(bp.interval_of(-0.1).has_value());
}

TEST_CASE("validate_family") {
  SUBCASE("uniform on [0,1] is clean") {
    CHECK(validate_family(single({0.0, 1.0}, {{0, 1, {1.0}}}, 0), true).empty());
  }
  SUBCASE("empty index range is a hard error") {
    CHECK_THROWS_AS(validate_family(single({0.0, 1.0}, {{1, 1, {1.0}}}, 0), false), ValidationError);
  }
  SUBCASE("2x on [0,1] has unit mass") {
    CHECK(validate_family(single({0.0, 1.0}, {{0, 1, {0.0, 2.0}}}, 1), true).empty());
  }
  SUBCASE("index past the grid") {
    CHECK_THROWS_AS(validate_family(single({0.0, 1.0}, {{0, 2, {1.0}}}, 0), false), ValidationError);
  }
  SUBCASE("overlapping segments") {
    CHECK_THROWS_AS(
        validate_family(single({0.0, 1.0, 2.0}, {{0, 2, {0.5}}, {1, 2, {0.5}}}, 0), false),
        ValidationError);
  }
  SUBCASE("coefficient count must match degree") {
    CHECK_THROWS_AS(validate_family(single({0.0, 1.0}, {{0, 1, {1.0, 0.0}}}, 0), false),
                    ValidationError);
  }
  SUBCASE("negativity and mass are only warnings") {
    const auto signed_fam = single({0.0, 1.0}, {{0, 1, {-1.0, 4.0}}}, 1);
    CHECK(validate_family(signed_fam, false).empty());
    CHECK_FALSE(validate_family(signed_fam, true).empty());
    CHECK_FALSE(validate_family(single({0.0, 1.0}, {{0, 1, {2.0}}}, 0), true).empty());
  }
  SUBCASE("degree cap") {
    CHECK_THROWS_AS(validate_family(single({0.0, 1.0}, {{0, 1, std::vector<double>(18, 0.0)}}, 17), false),
                    ValidationError);
  }
}

TEST_CASE("eval_density") {
  const auto fam = single({0.0, 1.0}, {{0, 1, {0.0, 2.0}}}, 1);
  const auto& f = fam.densities[0];
  CHECK(eval_density(f, fam.breakpoints, 0.25) == doctest::Approx(0.5));
  CHECK(eval_density(f, fam.breakpoints, -1.0) == 0.0);
  CHECK(eval_density(f, fam.breakpoints, 7.0) == 0.0);
  const auto one = single({0.0, 1.0}, {{0, 1, {1.0}}}, 0);
  CHECK(eval_density(one.densities[0], one.breakpoints, 1.0) == 0.0);
  CHECK(eval_density(one.densities[0], one.breakpoints, 0.0) == 1.0);
}

TEST_CASE("merge_breakpoints") {
  SUBCASE("two offset uniforms") {
    const auto fam = family_of({uniform("a", 0.0, 1.0), uniform("b", 0.5, 1.5)});
    CHECK(std::vector<double>(fam.breakpoints.points().begin(), fam.breakpoints.points().end()) ==
          std::vector<double>{0.0, 0.5, 1.0, 1.5});
    REQUIRE(fam.densities[0].segments.size() == 2);
    CHECK(fam.densities[0].segments[0].b == 0);
    CHECK(fam.densities[0].segments[0].c == 1);
    CHECK(fam.densities[0].segments[1].b == 1);
    CHECK(fam.densities[0].segments[1].c == 2);
    CHECK(fam.densities[0].segments[1].coeffs == std::vector<double>{1.0});
  }
  SUBCASE("single density keeps its endpoints") {
    const auto fam = family_of({kRamp});
    CHECK(fam.breakpoints.size() == 2);
    CHECK(fam.densities[0].segments[0].coeffs == kRamp.segments[0].coeffs);
  }
  SUBCASE("shared endpoint appears once") {
    const auto fam = family_of({uniform("a", 0.0, 1.0), uniform("b", 1.0, 2.0)});
    CHECK(fam.breakpoints.size() == 3);
  }
  SUBCASE("lower degree pieces are zero-padded") {
    const auto fam = family_of({uniform("a", 0.0, 1.0), kRamp});
    CHECK(fam.degree == 1);
    CHECK(fam.densities[0].segments[0].coeffs == std::vector<double>{1.0, 0.0});
  }
  SUBCASE("bad raw input") {
    std::vector<RawDensity> raw{{"x", {{0.0, NAN, {1.0}}}}};
    CHECK_THROWS_AS(merge_breakpoints(raw), ValidationError);
    raw = {{"x", {{1.0, 1.0, {1.0}}}}};
    CHECK_THROWS_AS(merge_breakpoints(raw), ValidationError);
  }
  SUBCASE("merge preserves pointwise values") {
    RandomStream rng(21, 0);
    std::vector<RawDensity> raw;
    for (int j = 0; j < 5; ++j) raw.push_back(random_density("f" + std::to_string(j), 4, 2, rng));
    const auto fam = merge_breakpoints(raw);
    CHECK(fam.breakpoints.size() <= 2 * 5 * 4);
    for (std::size_t j = 0; j < raw.size(); ++j) {
      for (int i = 0; i < 10000; ++i) {
        const double x = -0.5 + 5.0 * rng.uniform_open();
        double expected = 0.0;
        for (const auto& seg : raw[j].segments)
          if (x >= seg.lo && x < seg.hi) expected = poly::horner(seg.coeffs, x);
        REQUIRE(eval_density(fam.densities[j], fam.breakpoints, x) == expected);
      }
    }
  }
}

TEST_CASE("exact_l1_distance examples") {
  {
    const auto fam = family_of({uniform("a", 0.0, 1.0), uniform("b", 1.0, 2.0)});
    CHECK(exact_l1_distance(fam.densities[0], fam.densities[1], fam.breakpoints) == doctest::Approx(2.0));
  }
  {
    const auto fam = family_of({kFlat, kRamp});
    CHECK(exact_l1_distance(fam.densities[0], fam.densities[1], fam.breakpoints) == doctest::Approx(0.5));
    CHECK(exact_l1_distance(fam.densities[1], fam.densities[1], fam.breakpoints) == 0.0);
  }
}

TEST_CASE("exact_all_pairs") {
  const auto one = exact_all_pairs(family_of({uniform("a", 0.0, 1.0)}));
  CHECK(one.size() == 1);
  CHECK(one(0, 0) == 0.0);

  const auto same = exact_all_pairs(family_of({uniform("a", 0.0, 1.0), uniform("b", 0.0, 1.0)}));
  CHECK(same(0, 1) == 0.0);

  const auto shifted = exact_all_pairs(family_of({uniform("a", 0.0, 1.0), uniform("b", 0.5, 1.5)}));
  CHECK(shifted(0, 1) == doctest::Approx(1.0));
  CHECK(shifted(1, 0) == shifted(0, 1));
  CHECK(shifted.method() == DistanceMethod::exact);
  CHECK(shifted.names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("exact distance is a bounded metric") {
  RandomStream rng(22, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = trial % 4;
    const auto fam = random_family(3, 3, d, rng);
    const auto& bp = fam.breakpoints;
    const auto& f = fam.densities;
    const double ab = exact_l1_distance(f[0], f[1], bp);
    const double bc = exact_l1_distance(f[1], f[2], bp);
    const double ac = exact_l1_distance(f[0], f[2], bp);
    CHECK(ab == doctest::Approx(exact_l1_distance(f[1], f[0], bp)).epsilon(1e-12));
    CHECK(ac <= ab + bc + 1e-12);
    for (double v : {ab, bc, ac}) {
      CHECK(v >= 0.0);
      CHECK(v <= 2.0 + 1e-9);
    }
    CHECK(exact_l1_distance(f[0], f[0], bp) == 0.0);
  }
}

TEST_CASE("exact distance agrees with adaptive Simpson") {
  RandomStream rng(23, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = trial % 4;
    const auto fam = random_family(2, 3, d, rng);
    const auto& bp = fam.breakpoints;
    double quad = 0.0;
    for (std::size_t l = 0; l + 1 < bp.size(); ++l) {
      // |f - g| is one kinked polynomial per elementary interval; pre-split
      // so adaptive Simpson cannot step over a kink.
      const double hi_in = std::nextafter(bp[l + 1], bp[l]);
      auto integrand = [&](double x) {
        const double y = std::min(x, hi_in);
        return std::abs(eval_density(fam.densities[0], bp, y) - eval_density(fam.densities[1], bp, y));
      };
      constexpr int kPieces = 64;
      for (int i = 0; i < kPieces; ++i)
        quad += adaptive_simpson(integrand, bp[l] + (bp[l + 1] - bp[l]) * i / kPieces,
                                 bp[l] + (bp[l + 1] - bp[l]) * (i + 1) / kPieces, 1e-13);
    }
    CHECK(exact_l1_distance(fam.densities[0], fam.densities[1], bp) == doctest::Approx(quad).epsilon(1e-6));
  }
}

TEST_CASE("density sampler") {
  RandomStream rng(24, 0);
  SUBCASE("uniform mean") {
    const auto fam = family_of({uniform("u", 0.0, 1.0)});
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) s += sample_from_density(fam.densities[0], fam.breakpoints, rng);
    CHECK(s / 1e5 == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("ramp mean is 2/3") {
    const auto fam = family_of({kRamp});
    const DensitySampler sampler(fam.densities[0], fam.breakpoints);
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) s += sampler(rng);
    CHECK(std::abs(s / 1e5 - 2.0 / 3.0) < 0.01);
  }
  SUBCASE("draws stay inside the single segment") {
    const auto fam = family_of({uniform("u", 2.0, 2.5)});
    const DensitySampler sampler(fam.densities[0], fam.breakpoints);
    for (int i = 0; i < 10000; ++i) {
      const double x = sampler(rng);
      REQUIRE(x >= 2.0);
      REQUIRE(x <= 2.5);
    }
  }
  SUBCASE("zero mass is rejected") {
    const auto fam = single({0.0, 1.0}, {{0, 1, {0.0}}}, 0);
    CHECK_THROWS_AS(DensitySampler(fam.densities[0], fam.breakpoints), ParameterError);
  }
}
