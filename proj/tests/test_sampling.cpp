#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "displab/error.hpp"
#include "displab/geom.hpp"
#include "displab/sampling.hpp"
#include "displab/stats.hpp"

using namespace displab;
using geom::Matrix;
using geom::Vector;

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double m = stats::mean(xs);
  return {m, std::sqrt(stats::variance(xs) / double(xs.size()))};
}

bool within_3se(const Moments& m, double want) { return std::abs(m.mean - want) <= 3.0 * m.se; }

}  // namespace

TEST_CASE("uniform_ball") {
  RngStream rng(1);
  CHECK(sampling::uniform_ball(5, 0.0, rng) == Vector(5, 0.0));
  CHECK_THROWS_AS(sampling::uniform_ball(3, -1.0, rng), PreconditionViolation);

  std::vector<double> norm_sq, inner_sq, radial;
  const std::size_t n = 10;
  const Vector y = sampling::unit_vector(n, rng);
  for (int i = 0; i < 100000; ++i) {
    const Vector x = sampling::uniform_ball(n, 1.0, rng);
    norm_sq.push_back(geom::norm_sq(x));
    radial.push_back(geom::norm(x));
    const double d = geom::dot(x, y);
    inner_sq.push_back(d * d);
  }
  CHECK(within_3se(moments(norm_sq), 10.0 / 12.0));
  CHECK(within_3se(moments(inner_sq), 1.0 / 12.0));
  CHECK(*std::max_element(radial.begin(), radial.end()) <= 1.0);

  // Radial CDF t^n inside a DKW band (alpha = 0.001).
  std::sort(radial.begin(), radial.end());
  const double m = double(radial.size());
  const double band = std::sqrt(std::log(2.0 / 0.001) / (2.0 * m));
  double worst = 0.0;
  for (std::size_t k = 0; k < radial.size(); ++k) {
    const double f = std::pow(radial[k], double(n));
    worst = std::max({worst, std::abs(double(k + 1) / m - f), std::abs(double(k) / m - f)});
  }
  CHECK(worst <= band);
}

TEST_CASE("uniform_ball in one dimension") {
  RngStream rng(2);
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) {
    const double x = sampling::uniform_ball(1, 2.0, rng)[0];
    REQUIRE(std::abs(x) <= 2.0);
    xs.push_back(x);
  }
  CHECK(within_3se(moments(xs), 0.0));
}

TEST_CASE("uniform_cube") {
  RngStream rng(3);
  std::vector<double> first_sq, norm_sq;
  for (int i = 0; i < 50000; ++i) {
    const Vector x = sampling::uniform_cube(6, rng);
    for (double v : x) REQUIRE(std::abs(v) <= 1.0);
    first_sq.push_back(x[0] * x[0]);
    norm_sq.push_back(geom::norm_sq(x));
  }
  CHECK(within_3se(moments(first_sq), 1.0 / 3.0));
  CHECK(within_3se(moments(norm_sq), 2.0));
}

TEST_CASE("distribution D") {
  RngStream rng(4);
  const std::size_t n = 5;
  std::vector<double> row_sq;
  for (int i = 0; i < 20000; ++i) {
    const Matrix m = sampling::sample_matrix_D(n, rng);
    for (std::size_t r = 0; r < n; ++r) {
      REQUIRE(geom::norm(m.row(r)) <= std::sqrt(double(n)) + 1e-12);
      row_sq.push_back(geom::norm_sq(m.row(r)));
    }
  }
  // Rows of one matrix are independent, so pooling keeps the iid standard error.
  CHECK(within_3se(moments(row_sq), double(n * n) / double(n + 2)));
  RngStream a(9, {1}), b(9, {2});
  CHECK_FALSE(sampling::sample_matrix_D(3, a) == sampling::sample_matrix_D(3, b));
}

TEST_CASE("distribution D'") {
  RngStream rng(5);
  std::vector<double> entries, det_sq;
  for (int i = 0; i < 200000; ++i) {
    const Matrix m = sampling::sample_matrix_Dprime(3, rng);
    for (double v : m.data()) REQUIRE(std::abs(v) <= 1.0);
    if (i < 20000) entries.push_back(m(0, 0) * m(0, 0));
    const double d = geom::determinant(m);
    det_sq.push_back(d * d);
  }
  CHECK(within_3se(moments(entries), 1.0 / 3.0));
  // E det^2 = n! (E x^2)^n for iid zero-mean entries: 6 / 27.
  CHECK(within_3se(moments(det_sq), 6.0 / 27.0));
}

TEST_CASE("gaussian matrix rows") {
  RngStream rng(6);
  const std::size_t n = 20;
  std::size_t tail = 0, total = 0;
  std::vector<double> entries;
  for (int i = 0; i < 5000; ++i) {
    const Matrix g = sampling::sample_gaussian_matrix(n, rng);
    for (std::size_t r = 0; r < n; ++r, ++total)
      if (geom::norm_sq(g.row(r)) >= 2.0 * double(n)) ++tail;
    entries.push_back(g(3, 7));
  }
  CHECK(within_3se(moments(entries), 0.0));
  const double p = double(tail) / double(total);
  CHECK(p <= std::pow(2.0 / M_E, 10.0) + 3.0 * std::sqrt(p * (1 - p) / double(total)));
}

TEST_CASE("random_rotation") {
  RngStream rng(7);
  for (std::size_t n : {1, 2, 3, 6, 11}) {
    const Matrix u = sampling::random_rotation(n, rng);
    const Matrix prod = u * u.transpose();
    const Matrix id = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(prod(i, j) - id(i, j)) <= 1e-10);
    CHECK(geom::determinant(u) == doctest::Approx(1.0));
    const Matrix w = u * sampling::random_rotation(n, rng);
    const Matrix p2 = w.transpose() * w;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(p2(i, i) - 1.0) <= 1e-10);
  }
  const std::size_t n = 5;
  Vector v(n, 0.0);
  v[2] = 1.0;
  std::vector<double> proj;
  for (int i = 0; i < 20000; ++i) {
    const Matrix u = sampling::random_rotation(n, rng);
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) d += u(k, 0) * v[k];
    proj.push_back(d * d);
  }
  CHECK(within_3se(moments(proj), 1.0 / double(n)));
}

TEST_CASE("polytope sampling on the cube") {
  auto cube = geom::HPolytope::cube(3);
  cube.bounding_box.reset();  // force proposals from the bounding ball
  RngStream rng(8);
  sampling::SamplerConfig cfg;
  auto sample = sampling::sample_polytope_points(cube, cfg, 50000, rng);
  CHECK(sample.method_used == sampling::SamplerMethod::Rejection);
  std::vector<double> norm_sq;
  for (const auto& x : sample.points) {
    REQUIRE(cube.contains(x));
    norm_sq.push_back(geom::norm_sq(x));
  }
  CHECK(within_3se(moments(norm_sq), 1.0));
}

TEST_CASE("hit-and-run marginals on the cube") {
  const auto cube = geom::HPolytope::cube(4);
  sampling::HitAndRunChain chain(cube, Vector(4, 0.0), RngStream(9));
  chain.advance(1000);
  std::array<int, 10> deciles{};
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    chain.advance(4);
    const double x = chain.point()[0];
    REQUIRE(std::abs(x) <= 1.0 + 1e-12);
    ++deciles[std::min(9, int((x + 1.0) * 5.0))];
  }
  for (int d : deciles) CHECK(std::abs(double(d) / m - 0.1) <= 0.02 * 0.1 + 0.002);
}

TEST_CASE("thin polytope falls back to hit-and-run") {
  // Corner simplex {x >= 0, sum x <= 1} in 10 dimensions: 1/10! of its box.
  const std::size_t n = 10;
  geom::HPolytope p(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = -1.0;
    p.add_halfspace(e, 0.0);
  }
  p.add_halfspace(Vector(n, 1.0), 1.0);
  p.bounding_box = geom::Box{Vector(n, 0.0), Vector(n, 1.0)};
  p.bounding_radius = 1.0;
  sampling::SamplerConfig cfg;
  cfg.cap = 1000;
  RngStream rng(10);
  CHECK_THROWS_AS(sampling::sample_polytope_rejection(p, cfg, rng), RejectionCapExceeded);
  const auto s = sampling::sample_polytope_points(p, cfg, 2000, rng);
  CHECK(s.method_used == sampling::SamplerMethod::HitAndRun);
  std::vector<double> first;
  for (const auto& x : s.points) {
    REQUIRE(p.contains(x));
    first.push_back(x[0]);
  }
  // E x_1 = 1/(n+1) on the simplex; loose check for a thinned chain.
  CHECK(stats::mean(first) == doctest::Approx(1.0 / 11.0).epsilon(0.15));
}

TEST_CASE("hit-and-run and rejection agree on a random polytope") {
  const std::size_t n = 6;
  RngStream rng(11);
  auto p = geom::HPolytope::cube(n);
  for (int k = 0; k < 20; ++k) {
    const Vector u = sampling::unit_vector(n, rng);
    double l1 = 0.0;
    for (double v : u) l1 += std::abs(v);
    p.add_halfspace(u, 0.7 * l1);
  }
  sampling::SamplerConfig cfg;
  std::vector<double> rej;
  for (int i = 0; i < 20000; ++i) rej.push_back(geom::norm_sq(sampling::sample_polytope_rejection(p, cfg, rng)));
  std::vector<double> chain_means;
  for (std::uint64_t c = 0; c < 40; ++c) {
    sampling::HitAndRunChain chain(p, Vector(n, 0.0), rng.child(c));
    chain.advance(100 * n);
    double s = 0.0;
    for (int i = 0; i < 500; ++i) {
      chain.advance(n);
      s += geom::norm_sq(chain.point());
    }
    chain_means.push_back(s / 500.0);
  }
  const Moments a = moments(rej), b = moments(chain_means);
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.se, b.se));
}

TEST_CASE("find_interior_point") {
  auto p = geom::HPolytope::cube(3);
  p.add_halfspace(Vector{1.0, 1.0, 1.0}, -2.0);
  const Vector x = sampling::find_interior_point(p);
  CHECK(p.min_slack(x) > 0.0);
  geom::HPolytope empty(1);
  empty.add_halfspace(Vector{1.0}, -1.0);
  empty.add_halfspace(Vector{-1.0}, -1.0);
  CHECK_THROWS_AS(sampling::find_interior_point(empty), DegenerateInput);
}

TEST_CASE("sampling is deterministic") {
  RngStream a(12, {5}), b(12, {5});
  for (int i = 0; i < 10; ++i) CHECK(sampling::sample_matrix_D(4, a) == sampling::sample_matrix_D(4, b));
  CHECK(sampling::random_rotation(5, a) == sampling::random_rotation(5, b));
}
