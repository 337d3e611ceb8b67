#include "displab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numbers>
#include <utility>

#include "displab/error.hpp"

namespace displab::geom {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

Vector Matrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

void Matrix::set_row(std::size_t i, std::span<const double> v) {
  if (v.size() != cols_) throw DimensionMismatch("set_row: length mismatch");
  std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product shape mismatch");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

Vector Matrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = dot(row(i), x);
  return out;
}

Matrix Matrix::scaled(double c) const {
  Matrix out = *this;
  for (double& v : out.data_) v *= c;
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius_norm() const { return norm(data_); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }
double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.square() || m.rows() == 0) throw DimensionMismatch(std::string(what) + ": matrix must be square and nonempty");
}

// Orthonormal basis builder with one reorthogonalization pass (classical
// "twice is enough"). Vectors whose residual falls under `floor` are dropped.
class OrthoBasis {
 public:
  explicit OrthoBasis(double floor) : floor_(floor) {}

  // Returns the residual of v against the current basis without modifying it.
  Vector residual(std::span<const double> v) const {
    Vector r(v.begin(), v.end());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis_) {
        const double c = dot(q, r);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * q[k];
      }
    return r;
  }

  // Adds v; returns the residual norm, or 0 if v was (numerically) dependent.
  double add(std::span<const double> v) {
    Vector r = residual(v);
    const double len = norm(r);
    if (len <= floor_) return 0.0;
    for (double& x : r) x /= len;
    basis_.push_back(std::move(r));
    return len;
  }

 private:
  double floor_;
  std::vector<Vector> basis_;
};

}  // namespace

double determinant(const Matrix& m) {
  require_square(m, "determinant");
  const std::size_t n = m.rows();
  const double floor = kDegeneracyRatio * m.frobenius_norm();
  Matrix lu = m;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) <= floor) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      det = -det;
    }
    const double p = lu(k, k);
    det *= p;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / p;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return det;
}

std::vector<double> gram_schmidt_residuals(const Matrix& m) {
  require_square(m, "gram_schmidt_residuals");
  OrthoBasis basis(kDegeneracyRatio * m.frobenius_norm());
  std::vector<double> out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(basis.add(m.row(i)));
  return out;
}

double row_projection_residual(const Matrix& m, std::size_t i) {
  require_square(m, "row_projection_residual");
  if (i >= m.rows()) throw PreconditionViolation("row_projection_residual: row index out of range");
  const double floor = kDegeneracyRatio * m.frobenius_norm();
  OrthoBasis others(floor);
  for (std::size_t k = 0; k < m.rows(); ++k)
    if (k != i) others.add(m.row(k));
  const double len = norm(others.residual(m.row(i)));
  return len <= floor ? 0.0 : len;
}

double normalized_determinant(const Matrix& m) {
  require_square(m, "normalized_determinant");
  double denom = 1.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double len = norm(m.row(i));
    if (len == 0.0) throw DegenerateInput("normalized_determinant: zero row");
    denom *= len;
  }
  // The residual product is |det| and stays nonnegative by construction.
  double prod = 1.0;
  for (double r : gram_schmidt_residuals(m)) prod *= r;
  return std::clamp(prod / denom, 0.0, 1.0);
}

std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol) {
  require_square(s, "symmetric_eigenvalues");
  const std::size_t n = s.rows();
  Matrix a = s;
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * scale) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double min_singular_value(const Matrix& m) {
  require_square(m, "min_singular_value");
  const Matrix gram = m.transpose() * m;
  const double lambda = symmetric_eigenvalues(gram).front();
  const double sigma = std::sqrt(std::max(lambda, 0.0));
  return sigma <= kDegeneracyRatio * m.frobenius_norm() ? 0.0 : sigma;
}

double parallelopiped_volume(const Matrix& a) {
  require_square(a, "parallelopiped_volume");
  const double det = determinant(a);
  if (det == 0.0) throw DegenerateInput("parallelopiped_volume: singular matrix, body is unbounded");
  return std::ldexp(1.0, static_cast<int>(a.rows())) / std::abs(det);
}

double ball_volume(std::size_t n, double r) {
  const double half = 0.5 * static_cast<double>(n);
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0)) * std::pow(r, static_cast<double>(n));
}

bool Parallelopiped::contains(std::span<const double> x) const {
  if (x.size() != a.cols()) throw DimensionMismatch("Parallelopiped::contains: dimension mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (std::abs(dot(a.row(i), x)) > 1.0) return false;
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

HPolytope::HPolytope(std::size_t dim, const std::vector<Halfspace>& halfspaces) : HPolytope(dim) {
  for (const auto& h : halfspaces) add_halfspace(h.normal, h.offset);
}

HPolytope HPolytope::cube(std::size_t n) {
  HPolytope p(n);
  Vector e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1.0;
    p.add_halfspace(e, 1.0);
    e[i] = -1.0;
    p.add_halfspace(e, 1.0);
    e[i] = 0.0;
  }
  p.bounding_radius = std::sqrt(static_cast<double>(n));
  p.bounding_box = Box{Vector(n, -1.0), Vector(n, 1.0)};
  return p;
}

void HPolytope::add_halfspace(std::span<const double> normal, double offset) {
  if (normal.size() != dim_) throw DimensionMismatch("HPolytope: normal has wrong dimension");
  Matrix grown(normals_.rows() + 1, dim_);
  for (std::size_t k = 0; k < normals_.rows(); ++k) grown.set_row(k, normals_.row(k));
  grown.set_row(normals_.rows(), normal);
  normals_ = std::move(grown);
  offsets_.push_back(offset);
}

Halfspace HPolytope::halfspace(std::size_t k) const { return {normals_.row_vector(k), offsets_[k]}; }

double HPolytope::min_slack(std::span<const double> x) const {
  if (x.size() != dim_) throw DimensionMismatch("HPolytope: point has wrong dimension");
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < offsets_.size(); ++k) slack = std::min(slack, offsets_[k] - dot(normals_.row(k), x));
  return slack;
}

bool HPolytope::contains(std::span<const double> x) const { return min_slack(x) >= 0.0; }

bool Ball::contains(std::span<const double> x) const {
  if (x.size() != n) throw DimensionMismatch("Ball::contains: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - (center.empty() ? 0.0 : center[i]);
    s += d * d;
  }
  return s <= radius * radius;
}

}  // namespace displab::geom
