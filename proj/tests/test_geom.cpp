#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "displab/error.hpp"
#include "displab/geom.hpp"
#include "displab/rng.hpp"
#include "displab/sampling.hpp"

using namespace displab;
using geom::Matrix;
using geom::Vector;

namespace {

// Laplace expansion along the first row.
double cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    det += (c % 2 ? -1.0 : 1.0) * m(0, c) * cofactor_det(minor);
  }
  return det;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(Eigen::Index(i), Eigen::Index(j)) = m(i, j);
  return e;
}

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  return sampling::sample_matrix_Dprime(n, rng);
}

// |det M| / sqrt(det(M_{-i} M_{-i}^T)).
double gram_residual(const Matrix& m, std::size_t i) {
  Eigen::MatrixXd e = to_eigen(m);
  Eigen::MatrixXd others(e.rows() - 1, e.cols());
  for (Eigen::Index r = 0, k = 0; r < e.rows(); ++r)
    if (std::size_t(r) != i) others.row(k++) = e.row(r);
  return std::abs(e.determinant()) / std::sqrt((others * others.transpose()).determinant());
}

}  // namespace

TEST_CASE("determinant examples") {
  CHECK(geom::determinant(Matrix::identity(3)) == doctest::Approx(1.0));
  CHECK(geom::determinant(Matrix{{2, 0}, {0, 3}}) == doctest::Approx(6.0));
  CHECK(geom::determinant(Matrix{{0, 1}, {1, 0}}) == doctest::Approx(-1.0));
}

TEST_CASE("determinant agrees with cofactor expansion") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Matrix m = random_matrix(n, 100 * n + s);
      const double want = cofactor_det(m);
      CHECK(geom::determinant(m) == doctest::Approx(want).epsilon(1e-10).scale(1e-300));
      CHECK(std::abs(geom::determinant(m) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("gram_schmidt_residuals") {
  for (double r : geom::gram_schmidt_residuals(Matrix::identity(4))) CHECK(r == doctest::Approx(1.0));
  const auto r = geom::gram_schmidt_residuals(Matrix{{1, 0}, {1, 1}});
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(1.0));

  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix m = random_matrix(2 + s % 6, 7000 + s);
    const auto res = geom::gram_schmidt_residuals(m);
    double prod = 1.0;
    for (double v : res) {
      CHECK(v >= 0.0);
      prod *= v;
    }
    const double det = std::abs(geom::determinant(m));
    CHECK(std::abs(prod - det) <= 1e-9 * std::max(det, 1e-300) + 1e-15);
  }
}

TEST_CASE("gram_schmidt_residuals of a singular matrix contain a zero") {
  const auto r = geom::gram_schmidt_residuals(Matrix{{1, 2, 3}, {2, 4, 6}, {0, 1, 0}});
  CHECK(*std::min_element(r.begin(), r.end()) == 0.0);
}

TEST_CASE("row_projection_residual") {
  CHECK(geom::row_projection_residual(Matrix::identity(3), 0) == doctest::Approx(1.0));
  CHECK(geom::row_projection_residual(Matrix{{1, 0}, {1, 1}}, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix m = random_matrix(4, 900 + s);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(std::abs(geom::row_projection_residual(m, i) - gram_residual(m, i)) <= 1e-8);
  }
  CHECK(geom::row_projection_residual(Matrix{{1, 1}, {2, 2}}, 1) == 0.0);
  CHECK_THROWS_AS(geom::row_projection_residual(Matrix::identity(2), 2), PreconditionViolation);
}

TEST_CASE("row_projection_residual ignores the other rows' arrangement") {
  const Matrix m = random_matrix(4, 31);
  const double base = geom::row_projection_residual(m, 0);
  Matrix swapped = m;
  swapped.set_row(1, m.row(3));
  swapped.set_row(3, m.row(1));
  CHECK(geom::row_projection_residual(swapped, 0) == doctest::Approx(base).epsilon(1e-10));
  Matrix sheared = m;
  for (std::size_t j = 0; j < 4; ++j) sheared(2, j) += 0.7 * m(1, j);
  CHECK(geom::row_projection_residual(sheared, 0) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("normalized_determinant") {
  CHECK(geom::normalized_determinant(Matrix::identity(5)) == doctest::Approx(1.0));
  CHECK(geom::normalized_determinant(Matrix{{1, 0}, {1, 1}}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(geom::normalized_determinant(Matrix{{1, 2, 3}, {1, 2, 3}, {0, 1, 5}}) == 0.0);
  CHECK_THROWS_AS(geom::normalized_determinant(Matrix{{1, 0}, {0, 0}}), DegenerateInput);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const double v = geom::normalized_determinant(random_matrix(2 + s % 5, 400 + s));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  RngStream rng(3);
  CHECK(geom::normalized_determinant(sampling::random_rotation(6, rng).scaled(2.5)) == doctest::Approx(1.0));
}

TEST_CASE("min_singular_value") {
  CHECK(geom::min_singular_value(Matrix::identity(4)) == doctest::Approx(1.0));
  CHECK(geom::min_singular_value(Matrix{{3, 0}, {0, 0.5}}) == doctest::Approx(0.5));
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream rng(500 + s);
    const Matrix m = sampling::sample_gaussian_matrix(6, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    const double want = svd.singularValues().minCoeff();
    CHECK(std::abs(geom::min_singular_value(m) - want) <= 1e-8);
    const double sigma = geom::min_singular_value(m);
    for (std::size_t i = 0; i < 6; ++i) CHECK(sigma <= geom::norm(m.row(i)) + 1e-12);
    CHECK(geom::min_singular_value(m.scaled(3.0)) == doctest::Approx(3.0 * sigma).epsilon(1e-9));
  }
  CHECK(geom::min_singular_value(Matrix{{1, 2}, {2, 4}}) == 0.0);
}

TEST_CASE("parallelopiped_volume") {
  CHECK(geom::parallelopiped_volume(Matrix::identity(2)) == doctest::Approx(4.0));
  CHECK(geom::parallelopiped_volume(Matrix{{0.5, 0}, {0, 0.5}}) == doctest::Approx(16.0));
  CHECK_THROWS_AS(geom::parallelopiped_volume(Matrix{{1, 1}, {1, 1}}), DegenerateInput);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix a = random_matrix(3, 60 + s);
    if (geom::min_singular_value(a) < 1e-3) continue;
    const std::size_t n = 3;
    CHECK(geom::parallelopiped_volume(a) * std::abs(geom::determinant(a)) == doctest::Approx(std::ldexp(1.0, int(n))));
  }
}

TEST_CASE("parallelopiped_volume matches rejection in a bounding box") {
  const Matrix a{{1.0, 0.3, -0.2}, {0.1, 0.9, 0.4}, {-0.3, 0.2, 1.1}};
  const geom::Parallelopiped body{a};
  // Half-widths of the body along each axis from A^{-1}: |x_j| <= sum_i |(A^{-1})_{ji}|.
  Eigen::MatrixXd inv = to_eigen(a).inverse();
  Vector half(3);
  for (int j = 0; j < 3; ++j) half[std::size_t(j)] = inv.row(j).cwiseAbs().sum();
  RngStream rng(77);
  const std::size_t samples = 1000000;
  std::size_t inside = 0;
  Vector x(3);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < 3; ++j) x[j] = rng.uniform(-half[j], half[j]);
    if (body.contains(x)) ++inside;
  }
  const double box = 8.0 * half[0] * half[1] * half[2];
  const double est = box * double(inside) / double(samples);
  CHECK(std::abs(est - body.volume()) <= 0.05 * body.volume());
}

TEST_CASE("bodies") {
  const geom::Parallelopiped p{Matrix::identity(2)};
  CHECK(p.contains(Vector{1.0, -1.0}));
  CHECK_FALSE(p.contains(Vector{1.5, 0.0}));

  const auto cube = geom::HPolytope::cube(3);
  CHECK(cube.facet_count() == 6);
  CHECK(cube.contains(Vector{0.9, -0.9, 1.0}));
  CHECK_FALSE(cube.contains(Vector{0.0, 1.01, 0.0}));
  CHECK(cube.min_slack(Vector{0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  REQUIRE(cube.bounding_radius);
  CHECK(*cube.bounding_radius == doctest::Approx(std::sqrt(3.0)));

  const geom::Ball b{3, 2.0, {}};
  CHECK(b.contains(Vector{0.0, 2.0, 0.0}));
  CHECK_FALSE(b.contains(Vector{1.5, 1.5, 0.0}));
  CHECK(geom::ball_volume(2, 1.0) == doctest::Approx(M_PI));
  CHECK(geom::ball_volume(3, 2.0) == doctest::Approx(4.0 / 3.0 * M_PI * 8.0));
  CHECK_THROWS_AS(p.contains(Vector{0.0, 0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("symmetric_eigenvalues") {
  const auto ev = geom::symmetric_eigenvalues(Matrix{{2, 1}, {1, 2}});
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));
}
