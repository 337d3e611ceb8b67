#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "displab/error.hpp"
#include "displab/experiments.hpp"
#include "displab/rng.hpp"
#include "displab/sampling.hpp"
#include "displab/stats.hpp"

using namespace displab;
using namespace displab::stats;

namespace {

// Smallest b - a over all sample pairs with enough samples in [a, b].
double brute_dispersion(std::vector<double> xs, double p) {
  const std::size_t m = xs.size();
  const std::size_t need = static_cast<std::size_t>(std::ceil((1.0 - p) * double(m) - 1e-9));
  double best = INFINITY;
  for (double a : xs)
    for (double b : xs) {
      if (b < a) continue;
      const auto inside = std::count_if(xs.begin(), xs.end(), [&](double v) { return a <= v && v <= b; });
      if (std::size_t(inside) >= std::max<std::size_t>(need, 1)) best = std::min(best, b - a);
    }
  return best;
}

std::vector<double> draw(RngStream& rng, std::size_t m) {
  std::vector<double> xs(m);
  const int kind = int(rng.below(3));
  for (double& x : xs) {
    if (kind == 0) x = rng.uniform();
    if (kind == 1) x = rng.normal();
    if (kind == 2) x = double(rng.below(5));  // ties
  }
  return xs;
}

}  // namespace

TEST_CASE("p_dispersion examples") {
  const ScalarSampleSet s({9, 3, 0, 1, 2, 4, 5, 6, 7, 8});
  CHECK(s.values().front() == 0.0);
  const auto d = p_dispersion(s, 0.5);
  CHECK(d.width == 4.0);
  CHECK(d.hi - d.lo == d.width);
  CHECK(p_dispersion(ScalarSampleSet({2, 2, 2, 2}), 0.3).width == 0.0);
  CHECK(p_dispersion(s, 1e-6).width == 9.0);
  CHECK(required_count(0.1, 10) == 9);
  CHECK_THROWS_AS(p_dispersion(s, 0.0), PreconditionViolation);
  CHECK_THROWS_AS(p_dispersion(s, 1.0), PreconditionViolation);
  CHECK_THROWS_AS(ScalarSampleSet({}), PreconditionViolation);
}

TEST_CASE("p_dispersion equals the brute-force infimum") {
  RngStream rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto xs = draw(rng, 1 + rng.below(60));
    for (double p : {0.1, 0.5, 0.9}) {
      const auto d = p_dispersion(ScalarSampleSet(xs), p);
      CHECK(d.width == brute_dispersion(xs, p));
      const auto covered = std::count_if(xs.begin(), xs.end(), [&](double v) { return d.lo <= v && v <= d.hi; });
      CHECK(std::size_t(covered) >= required_count(p, xs.size()));
    }
  }
}

TEST_CASE("p_dispersion properties") {
  RngStream rng(2);
  const auto xs = draw(rng, 100);
  double prev = INFINITY;
  for (double p = 0.05; p < 1.0; p += 0.05) {
    const double w = p_dispersion(ScalarSampleSet(xs), p).width;
    CHECK(w <= prev);
    prev = w;
    std::vector<double> shifted = xs, stretched = xs;
    for (double& v : shifted) v += 3.25;
    for (double& v : stretched) v *= 2.0;
    CHECK(p_dispersion(ScalarSampleSet(shifted), p).width == doctest::Approx(w));
    CHECK(p_dispersion(ScalarSampleSet(stretched), p).width == doctest::Approx(2.0 * w));
  }
}

TEST_CASE("variance and norm samples") {
  CHECK(variance(ScalarSampleSet({3, 3, 3})) == 0.0);
  CHECK(variance(ScalarSampleSet({0, 2})) == 2.0);
  CHECK_THROWS_AS(variance(ScalarSampleSet({1})), PreconditionViolation);

  RngStream rng(3);
  std::vector<geom::Vector> pts;
  for (int i = 0; i < 100000; ++i) pts.push_back(sampling::uniform_ball(2, 1.0, rng));
  const auto ns = norm_sq_samples(pts);
  // var||X||^2 = n/(n+4) - (n/(n+2))^2 = 1/12 at n = 2.
  const double v = variance(ns);
  std::vector<double> centred;
  for (double x : ns.values()) centred.push_back((x - ns.mean()) * (x - ns.mean()));
  const double se = std::sqrt(variance(centred) / double(centred.size()));
  CHECK(std::abs(v - 1.0 / 12.0) <= 3.0 * se);
  CHECK(sigma_k_sq(pts) == doctest::Approx(2.0 / 3.0).epsilon(0.03));
}

TEST_CASE("sigma_k_sq") {
  std::vector<geom::Vector> sphere;
  RngStream rng(4);
  for (int i = 0; i < 100; ++i) sphere.push_back(sampling::unit_vector(5, rng));
  CHECK(sigma_k_sq(sphere) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  std::vector<geom::Vector> cube;
  for (int i = 0; i < 100000; ++i) cube.push_back(sampling::uniform_cube(7, rng));
  CHECK(sigma_k_sq(cube) == doctest::Approx(0.8).epsilon(0.03));
  CHECK_THROWS_AS(sigma_k_sq(std::vector<geom::Vector>(3, geom::Vector(2, 0.0))), DegenerateInput);
}

TEST_CASE("disp_lower_bound_from_variance") {
  const auto a = disp_lower_bound_from_variance(1.0, 2.0);
  CHECK(a.p == doctest::Approx(3.0 / 16.0));
  CHECK(a.bound == doctest::Approx(1.0));
  const auto b = disp_lower_bound_from_variance(4.0, 10.0, DispBound::LogConcave, 0.5);
  CHECK(b.bound == doctest::Approx(1.0));
  CHECK_THROWS_AS(disp_lower_bound_from_variance(9.0, 2.0), PreconditionViolation);

  RngStream rng(5);
  std::vector<double> u;
  for (int i = 0; i < 100000; ++i) u.push_back(rng.uniform());
  const double disp = p_dispersion(ScalarSampleSet(u), 0.5).width;
  CHECK(disp == doctest::Approx(0.5).epsilon(0.02));
  CHECK(disp >= disp_lower_bound_from_variance(1.0 / 12.0, 1.0, DispBound::LogConcave, 0.5).bound);
  // Bounded-support bound on the same samples.
  const auto bs = disp_lower_bound_from_variance(1.0 / 12.0, 1.0);
  CHECK(p_dispersion(ScalarSampleSet(u), bs.p).width >= bs.bound);
}

TEST_CASE("mixture_dispersion_check") {
  RngStream rng(6);
  std::vector<double> x, z;
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.uniform();
    x.push_back(v);
    z.push_back(rng.uniform() < 0.5 ? rng.uniform() : 5.0);
  }
  CHECK(mixture_dispersion_check(ScalarSampleSet(x), ScalarSampleSet(x), 1.0, 0.3));
  CHECK(mixture_dispersion_check(ScalarSampleSet(x), ScalarSampleSet(z), 0.5, 0.3, 0.01));
  CHECK(mixture_dispersion_check(ScalarSampleSet({1, 1, 1}), ScalarSampleSet({1, 1, 1, 1}), 0.5, 0.3));
}

TEST_CASE("product and total variance identities") {
  RngStream rng(7);
  std::vector<double> x, y, xy;
  for (int i = 0; i < 200000; ++i) {
    x.push_back(1.0 + rng.uniform());
    y.push_back(2.0 + rng.normal() * 0.3);
    xy.push_back(x.back() * y.back());
  }
  const double want = product_relative_variance(relative_variance(x), relative_variance(y));
  CHECK(relative_variance(xy) == doctest::Approx(want).epsilon(0.03));

  std::vector<double> vals;
  std::vector<std::size_t> groups;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t g = rng.below(4);
    groups.push_back(g);
    vals.push_back(double(g) + rng.normal());
  }
  const auto d = total_variance(vals, groups);
  CHECK(d.total == doctest::Approx(d.within + d.between).epsilon(1e-12));
}

TEST_CASE("piecewise constant densities") {
  const PiecewiseConstantDensity u;
  CHECK(u.mean() == doctest::Approx(0.5));
  CHECK(u.variance() == doctest::Approx(1.0 / 12.0));
  CHECK(u.cdf(0.25) == doctest::Approx(0.25));
  CHECK_THROWS_AS(PiecewiseConstantDensity({0.0, 1.0}, {2.0}), PreconditionViolation);
  CHECK_THROWS_AS(PiecewiseConstantDensity({0.5, 1.0}, {2.0}), PreconditionViolation);
  CHECK(cdf_is_logconcave(u));
  const auto bumps = PiecewiseConstantDensity::normalized({0.0, 1.0, 9.0, 10.0}, {1.0, 0.0, 1.0});
  CHECK_FALSE(cdf_is_logconcave(bumps));
  CHECK_THROWS_AS(uniform_part_decomposition(bumps), PreconditionViolation);
}

TEST_CASE("uniform part of the uniform and triangular densities") {
  const PiecewiseConstantDensity u;
  const auto up = uniform_part_decomposition(u);
  CHECK(up.a >= 0.5);
  CHECK(up.alpha > 0.0);
  CHECK(up.alpha <= 1.0);
  const auto cu = experiments::check_uniform_part(u, up);
  CHECK(cu.ok());
  CHECK(cu.width_ratio > 0.0);

  std::vector<double> br, lv;
  for (int k = 0; k <= 64; ++k) br.push_back(2.0 * k / 64.0);
  for (int k = 0; k < 64; ++k) lv.push_back(1.0 - std::abs(0.5 * (br[k] + br[k + 1]) - 1.0));
  const auto tri = PiecewiseConstantDensity::normalized(br, lv);
  const auto tp = uniform_part_decomposition(tri);
  CHECK(experiments::check_uniform_part(tri, tp).ok());
}

TEST_CASE("dispersion_csv") {
  const auto d = p_dispersion(ScalarSampleSet({0, 1, 2, 3}), 0.5);
  const std::string csv = dispersion_csv("x", {d, d});
  CHECK(csv.rfind("statistic,p,width,lo,hi,m\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("x,0.5,") != std::string::npos);
}
