#pragma once

// Query algorithms that work through the oracles: binary search along a
// line, random-projection length estimation, entrywise matrix recovery, and
// the rotated brick bodies that defeat nonadaptive volume algorithms.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "displab/geom.hpp"
#include "displab/oracle.hpp"
#include "displab/rng.hpp"

namespace displab::algorithms {

using geom::Matrix;
using geom::Vector;
using oracle::Transcript;

// Hidden halfspace {x : a . x <= 1} behind a membership oracle.
class HalfspaceOracle {
 public:
  explicit HalfspaceOracle(Vector a) : a_(std::move(a)) {}

  std::size_t dim() const { return a_.size(); }
  bool contains(std::span<const double> x) const { return geom::dot(a_, x) <= 1.0; }
  bool query(std::span<const double> x) { return oracle::membership_query(*this, x, transcript_); }
  const Transcript& transcript() const { return transcript_; }

 private:
  Vector a_;
  Transcript transcript_;
};

// Hidden matrix behind "is A(i, j) <= a?" queries.
class EntryOracle {
 public:
  explicit EntryOracle(Matrix a) : a_(std::move(a)) {}

  std::size_t dim() const { return a_.rows(); }
  bool at_most(std::size_t i, std::size_t j, double threshold) {
    return oracle::entry_threshold_query(a_, i, j, threshold, transcript_);
  }
  const Transcript& transcript() const { return transcript_; }

 private:
  Matrix a_;
  Transcript transcript_;
};

inline constexpr double kDefaultMaxExtent = 1048576.0;  // 2^20

struct Extent {
  double value = 0.0;
  // |a . b| <= 1 / t_max; value is reported as 0.
  bool below_resolution = false;
  std::size_t queries = 0;
};

// Estimates a . b for unit b to within eps by locating the boundary of the
// halfspace along the line through b. Searches along -b when the boundary
// is not on the +b side.
Extent directional_extent(HalfspaceOracle& oracle, std::span<const double> b, double eps,
                          double t_max = kDefaultMaxExtent);

struct LengthEstimate {
  double value = 0.0;
  std::size_t projections = 0;
  std::size_t queries = 0;
  double eps = 0.0;
};

// ||a|| from k random unit directions: sqrt(n * mean (a . b_j)^2), using
// E (a . b)^2 = ||a||^2 / n for b uniform on the sphere.
LengthEstimate estimate_length(HalfspaceOracle& oracle, std::size_t k, double eps, RngStream& rng,
                               double t_max = kDefaultMaxExtent);

// Bisection steps per entry for target width eps on [-1, 1]:
// max(0, ceil(log2(2 / eps))).
std::size_t bisection_steps(double eps);

struct Recovery {
  Matrix matrix;
  std::size_t queries = 0;
};

// Every entry localized by bisection on [-1, 1] to an interval of width at
// most eps and reported at its midpoint.
Recovery recover_matrix(EntryOracle& oracle, double eps);

struct VolumeRecovery {
  double volume = 0.0;
  double eps = 0.0;
  std::size_t queries = 0;
  Matrix recovered;
};

// Largest entrywise error that keeps the volume within relative error c
// when sigma_min(A) >= sigma_floor: with ||E||_2 <= n eps the determinant
// moves by a factor in [(1 - d)^n, (1 + d)^n], d = n eps / sigma_floor.
double recovery_tolerance(std::size_t n, double sigma_floor, double target_rel_error);

// 2^n / |det A~| for A~ = recover_matrix(eps = recovery_tolerance(...)).
// Throws DegenerateInput if the recovered matrix is singular.
VolumeRecovery estimate_volume_via_recovery(EntryOracle& oracle, double sigma_floor, double target_rel_error = 0.05);

enum class BrickVariant { Brick, DoubleBrick };

// {|x_i| <= 1 for i >= 1} intersected with the ball of radius n (Brick) or
// 2n (DoubleBrick), rotated by U.
struct AdversarialBody {
  BrickVariant variant = BrickVariant::Brick;
  Matrix rotation;
  std::size_t n = 2;

  std::size_t dim() const { return n; }
  double radius() const { return variant == BrickVariant::Brick ? double(n) : 2.0 * double(n); }
  bool contains(std::span<const double> q) const;
};

AdversarialBody make_adversarial_body(BrickVariant variant, std::size_t n, RngStream& rng);

// True iff U^T q lies in the slab and n < |q| <= 2n: the only points where
// the two bodies (same rotation) answer differently.
bool in_symmetric_difference(const Matrix& rotation, std::size_t n, std::span<const double> q);

using BrickClassifier = std::function<BrickVariant(const std::vector<bool>& answers, RngStream& rng)>;

// Bayes-optimal rule for a fixed query set: any Yes at a point outside the
// radius-n ball means DoubleBrick; otherwise Brick when at least one query
// could have told them apart, and a fair coin when none could.
BrickClassifier bayes_brick_classifier(const std::vector<Vector>& queries, std::size_t n);

struct NonadaptiveOutcome {
  BrickVariant truth = BrickVariant::Brick;
  BrickVariant guess = BrickVariant::Brick;
  std::size_t hits = 0;
};

// Draws the hidden body (fair coin + Haar rotation), answers the fixed
// queries, and classifies.
NonadaptiveOutcome nonadaptive_trial(const std::vector<Vector>& queries, std::size_t n,
                                     const BrickClassifier& classifier, RngStream& rng);

// Per-query hit probability bound n (2 / (n pi))^{n/2}.
double bad_surface_hit_bound(std::size_t n);

}  // namespace displab::algorithms
