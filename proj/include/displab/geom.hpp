#pragma once

// Dense linear algebra and convex-body primitives at desk scale (n up to a
// few hundred). Everything here is a pure function of its inputs.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace displab::geom {

using Vector = std::vector<double>;

// Row-major dense matrix. Body matrices are square; halfspace normal tables
// (HPolytope) are rectangular.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector row_vector(std::size_t i) const;
  void set_row(std::size_t i, std::span<const double> v);

  std::span<const double> data() const { return data_; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(std::span<const double> x) const;
  Matrix scaled(double c) const;

  // Largest absolute entry; the reference scale for degeneracy thresholds.
  double max_abs() const;
  double frobenius_norm() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_sq(std::span<const double> a);

// Residuals and singular values below kDegeneracyRatio * ||M|| are reported
// as exactly zero.
inline constexpr double kDegeneracyRatio = 1e-12;

// Partially pivoted elimination. Returns exactly 0 when a pivot falls below
// the degeneracy threshold.
double determinant(const Matrix& m);

// Norms of the Gram-Schmidt residuals: entry i is the length of row i after
// removing its projection onto rows 0..i-1.
std::vector<double> gram_schmidt_residuals(const Matrix& m);

// Length of row i projected onto the orthogonal complement of all other rows.
double row_projection_residual(const Matrix& m, std::size_t i);

// |det M| / prod ||M_i||. Throws DegenerateInput on a zero row.
double normalized_determinant(const Matrix& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol = 1e-12);

double min_singular_value(const Matrix& m);

// Volume of {x : ||Ax||_inf <= 1}, i.e. 2^n / |det A|. Throws
// DegenerateInput for singular A (the body is unbounded).
double parallelopiped_volume(const Matrix& a);

// Volume of the Euclidean ball of radius r in R^n.
double ball_volume(std::size_t n, double r);

struct Parallelopiped {
  Matrix a;

  std::size_t dim() const { return a.cols(); }
  bool contains(std::span<const double> x) const;
  double volume() const { return parallelopiped_volume(a); }
};

struct Halfspace {
  Vector normal;
  double offset = 0.0;  // normal . x <= offset
};

struct Box {
  Vector lo;
  Vector hi;

  double volume() const;
};

// Intersection of halfspaces. The normals are kept in one dense table so
// sampler inner loops touch contiguous memory.
class HPolytope {
 public:
  HPolytope() = default;
  explicit HPolytope(std::size_t dim) : dim_(dim), normals_(0, dim) {}
  HPolytope(std::size_t dim, const std::vector<Halfspace>& halfspaces);

  // [-1,1]^n as 2n halfspaces, with its box and circumradius recorded.
  static HPolytope cube(std::size_t n);

  void add_halfspace(std::span<const double> normal, double offset);

  std::size_t dim() const { return dim_; }
  std::size_t facet_count() const { return offsets_.size(); }
  const Matrix& normals() const { return normals_; }
  const Vector& offsets() const { return offsets_; }
  Halfspace halfspace(std::size_t k) const;

  bool contains(std::span<const double> x) const;
  // min_k (offset_k - normal_k . x); positive iff x is strictly inside.
  double min_slack(std::span<const double> x) const;

  std::optional<double> bounding_radius;
  std::optional<Box> bounding_box;

 private:
  std::size_t dim_ = 0;
  Matrix normals_;
  Vector offsets_;
};

struct Ball {
  std::size_t n = 1;
  double radius = 1.0;
  Vector center;  // empty means the origin

  std::size_t dim() const { return n; }
  bool contains(std::span<const double> x) const;
  double volume() const { return ball_volume(n, radius); }
};

}  // namespace displab::geom
