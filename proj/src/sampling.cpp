#include "displab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "displab/error.hpp"

namespace displab::sampling {

Vector gaussian_vector(std::size_t n, RngStream& rng) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

Vector unit_vector(std::size_t n, RngStream& rng) {
  for (;;) {
    Vector v = gaussian_vector(n, rng);
    const double len = geom::norm(v);
    if (len == 0.0) continue;
    for (double& x : v) x /= len;
    return v;
  }
}

Vector uniform_ball(std::size_t n, double r, RngStream& rng) {
  if (r < 0.0) throw PreconditionViolation("uniform_ball: negative radius");
  if (r == 0.0) return Vector(n, 0.0);
  Vector v = unit_vector(n, rng);
  const double rho = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  for (double& x : v) x *= rho;
  return v;
}

Vector uniform_cube(std::size_t n, RngStream& rng) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

Matrix sample_matrix_D(std::size_t n, RngStream& rng) {
  Matrix m(n, n);
  const double r = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, uniform_ball(n, r, rng));
  return m;
}

Matrix sample_matrix_Dprime(std::size_t n, RngStream& rng) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Matrix sample_gaussian_matrix(std::size_t n, RngStream& rng) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix random_rotation(std::size_t n, RngStream& rng) {
  if (n == 0) throw PreconditionViolation("random_rotation: n must be positive");
  // Rows of the Gaussian matrix become the columns of U after Gram-Schmidt.
  // Modified Gram-Schmidt gives a positive diagonal in R, which is what makes
  // the orthogonal factor Haar distributed.
  std::vector<Vector> q;
  q.reserve(n);
  while (q.size() < n) {
    Vector v = gaussian_vector(n, rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) {
        const double c = geom::dot(b, v);
        for (std::size_t k = 0; k < n; ++k) v[k] -= c * b[k];
      }
    const double len = geom::norm(v);
    if (len < 1e-8) continue;
    for (double& x : v) x /= len;
    q.push_back(std::move(v));
  }
  Matrix u = Matrix::from_rows(q).transpose();
  if (geom::determinant(u) < 0.0)
    for (std::size_t i = 0; i < n; ++i) u(i, 0) = -u(i, 0);
  return u;
}

Vector sample_polytope_rejection(const HPolytope& p, const SamplerConfig& cfg, RngStream& rng) {
  const std::size_t n = p.dim();
  if (!p.bounding_box && !p.bounding_radius)
    throw PreconditionViolation("sample_polytope: rejection needs a bounding box or radius");
  for (std::size_t attempt = 0; attempt < cfg.cap; ++attempt) {
    Vector x;
    if (p.bounding_box) {
      x.resize(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(p.bounding_box->lo[i], p.bounding_box->hi[i]);
    } else {
      x = uniform_ball(n, *p.bounding_radius, rng);
    }
    if (p.contains(x)) return x;
  }
  throw RejectionCapExceeded("sample_polytope: rejection cap exceeded");
}

Vector find_interior_point(const HPolytope& p) {
  const std::size_t n = p.dim();
  const std::size_t m = p.facet_count();
  if (m == 0) return Vector(n, 0.0);
  Vector inv_len(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double len = geom::norm(p.normals().row(k));
    if (len == 0.0) {
      if (p.offsets()[k] < 0.0) throw DegenerateInput("find_interior_point: infeasible zero-normal constraint");
      inv_len[k] = 0.0;
    } else {
      inv_len[k] = 1.0 / len;
    }
  }

  Vector x(n, 0.0);
  double scale = 1.0;
  if (p.bounding_box) {
    for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 * (p.bounding_box->lo[i] + p.bounding_box->hi[i]);
    scale = 0.5 * geom::norm([&] {
      Vector w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = p.bounding_box->hi[i] - p.bounding_box->lo[i];
      return w;
    }());
  } else if (p.bounding_radius) {
    scale = *p.bounding_radius;
  }

  auto depth = [&](const Vector& y, std::size_t& worst) {
    double best = std::numeric_limits<double>::infinity();
    worst = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (inv_len[k] == 0.0) continue;
      const double s = (p.offsets()[k] - geom::dot(p.normals().row(k), y)) * inv_len[k];
      if (s < best) {
        best = s;
        worst = k;
      }
    }
    return best;
  };

  Vector best_x = x;
  std::size_t worst = 0;
  double best_depth = depth(x, worst);
  const std::size_t iters = 4000 + 200 * n;
  for (std::size_t it = 0; it < iters; ++it) {
    const double d = depth(x, worst);
    if (d > best_depth) {
      best_depth = d;
      best_x = x;
    }
    // Move away from the tightest facet.
    const double step = scale / std::sqrt(static_cast<double>(it) + 1.0) * 0.1;
    const auto a = p.normals().row(worst);
    for (std::size_t i = 0; i < n; ++i) x[i] -= step * a[i] * inv_len[worst];
  }
  if (best_depth <= 0.0) throw DegenerateInput("find_interior_point: polytope has empty interior");
  return best_x;
}

HitAndRunChain::HitAndRunChain(const HPolytope& p, Vector start, RngStream rng)
    : poly_(&p), x_(std::move(start)), rng_(std::move(rng)) {
  if (x_.size() != p.dim()) throw DimensionMismatch("HitAndRunChain: start point has wrong dimension");
  if (!p.contains(x_)) throw PreconditionViolation("HitAndRunChain: start point outside polytope");
  ax_ = p.normals() * x_;
  dir_.resize(p.dim());
  adir_.resize(p.facet_count());
}

void HitAndRunChain::step() {
  const std::size_t n = poly_->dim();
  const std::size_t m = poly_->facet_count();
  const auto& a = poly_->normals();
  const auto& b = poly_->offsets();

  double len = 0.0;
  do {
    for (double& d : dir_) d = rng_.normal();
    len = geom::norm(dir_);
  } while (len == 0.0);
  for (double& d : dir_) d /= len;

  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    const double ad = geom::dot(a.row(k), dir_);
    adir_[k] = ad;
    const double slack = std::max(b[k] - ax_[k], 0.0);
    if (ad > 0.0)
      tmax = std::min(tmax, slack / ad);
    else if (ad < 0.0)
      tmin = std::max(tmin, slack / ad);
  }
  if (!std::isfinite(tmin) || !std::isfinite(tmax)) {
    if (!poly_->bounding_radius) throw DegenerateInput("HitAndRunChain: unbounded chord and no bounding radius");
    // Clip the chord to the bounding ball |x + t d| <= R.
    const double r = *poly_->bounding_radius;
    const double xd = geom::dot(x_, dir_);
    const double disc = std::max(xd * xd - (geom::norm_sq(x_) - r * r), 0.0);
    tmin = std::max(tmin, -xd - std::sqrt(disc));
    tmax = std::min(tmax, -xd + std::sqrt(disc));
  }
  const double t = rng_.uniform(tmin, tmax);
  for (std::size_t i = 0; i < n; ++i) x_[i] += t * dir_[i];
  for (std::size_t k = 0; k < m; ++k) ax_[k] += t * adir_[k];
}

void HitAndRunChain::advance(std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) step();
}

Vector sample_polytope(const HPolytope& p, const SamplerConfig& cfg, RngStream& rng) {
  if (cfg.method == SamplerMethod::Rejection) return sample_polytope_rejection(p, cfg, rng);
  HitAndRunChain chain(p, find_interior_point(p), rng.child(0));
  chain.advance(cfg.burn_in_for(p.dim()));
  return chain.point();
}

PolytopeSample sample_polytope_points(const HPolytope& p, const SamplerConfig& cfg, std::size_t count,
                                      RngStream& rng) {
  PolytopeSample out;
  out.points.reserve(count);
  if (cfg.method == SamplerMethod::Rejection) {
    try {
      while (out.points.size() < count) out.points.push_back(sample_polytope_rejection(p, cfg, rng));
      out.method_used = SamplerMethod::Rejection;
      return out;
    } catch (const RejectionCapExceeded&) {
      out.points.clear();
    }
  }
  out.method_used = SamplerMethod::HitAndRun;
  const std::size_t n = p.dim();
  HitAndRunChain chain(p, find_interior_point(p), rng.child(1));
  chain.advance(cfg.burn_in_for(n));
  const std::size_t thin = cfg.thinning_for(n);
  while (out.points.size() < count) {
    chain.advance(thin);
    out.points.push_back(chain.point());
  }
  return out;
}

}  // namespace displab::sampling
