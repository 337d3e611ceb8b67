#pragma once

// Seeded generators for the random inputs used across the experiments: points
// in balls, cubes and polytopes, and the matrix ensembles D, D' and Gaussian.

#include <cstddef>
#include <vector>

#include "displab/geom.hpp"
#include "displab/rng.hpp"

namespace displab::sampling {

using geom::HPolytope;
using geom::Matrix;
using geom::Vector;

enum class SamplerMethod { Rejection, HitAndRun };

struct SamplerConfig {
  SamplerMethod method = SamplerMethod::Rejection;
  // Zero means "use the default for this dimension": 100 n burn-in steps and
  // n thinning steps.
  std::size_t burn_in = 0;
  std::size_t thinning = 0;
  std::size_t cap = 100000;

  std::size_t burn_in_for(std::size_t n) const { return burn_in ? burn_in : 100 * n; }
  std::size_t thinning_for(std::size_t n) const { return thinning ? thinning : n; }
};

Vector gaussian_vector(std::size_t n, RngStream& rng);
// Uniform direction on the unit sphere S^{n-1}.
Vector unit_vector(std::size_t n, RngStream& rng);

// Uniform in r B_n: Gaussian direction times r U^{1/n}.
Vector uniform_ball(std::size_t n, double r, RngStream& rng);
Vector uniform_cube(std::size_t n, RngStream& rng);

// D: rows independent and uniform in the ball of radius sqrt(n).
Matrix sample_matrix_D(std::size_t n, RngStream& rng);
// D': entries independent and uniform in [-1, 1].
Matrix sample_matrix_Dprime(std::size_t n, RngStream& rng);
Matrix sample_gaussian_matrix(std::size_t n, RngStream& rng);
// Haar measure on SO(n): orthonormalized Gaussian columns, one column
// flipped when needed so the determinant is +1.
Matrix random_rotation(std::size_t n, RngStream& rng);

// Exactly uniform point by rejection from the polytope's bounding box if it
// has one, else from its bounding ball. Throws RejectionCapExceeded after
// cfg.cap proposals.
Vector sample_polytope_rejection(const HPolytope& p, const SamplerConfig& cfg, RngStream& rng);

// A point with positive slack for every facet, found by subgradient ascent
// on the normalized minimum slack. Throws DegenerateInput if none is found.
Vector find_interior_point(const HPolytope& p);

// Hit-and-run walk inside an HPolytope. Keeps A x up to date incrementally so
// a step costs one pass over the normal table.
class HitAndRunChain {
 public:
  HitAndRunChain(const HPolytope& p, Vector start, RngStream rng);

  void step();
  void advance(std::size_t steps);
  const Vector& point() const { return x_; }

 private:
  const HPolytope* poly_;
  Vector x_;
  Vector ax_;
  Vector dir_;
  Vector adir_;
  RngStream rng_;
};

// Single point: rejection, or a fresh hit-and-run chain after burn-in.
Vector sample_polytope(const HPolytope& p, const SamplerConfig& cfg, RngStream& rng);

struct PolytopeSample {
  std::vector<Vector> points;
  SamplerMethod method_used = SamplerMethod::Rejection;
};

// `count` points. In rejection mode, falls back to hit-and-run (one chain,
// thinned) the first time the cap is hit.
PolytopeSample sample_polytope_points(const HPolytope& p, const SamplerConfig& cfg, std::size_t count, RngStream& rng);

}  // namespace displab::sampling
