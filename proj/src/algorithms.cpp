#include "displab/algorithms.hpp"

#include <cmath>
#include <numbers>

#include "displab/error.hpp"
#include "displab/sampling.hpp"

namespace displab::algorithms {

Extent directional_extent(HalfspaceOracle& oracle, std::span<const double> b, double eps, double t_max) {
  if (!(eps > 0.0) || !(t_max > 0.0)) throw PreconditionViolation("directional_extent: eps and t_max must be positive");
  if (b.size() != oracle.dim()) throw DimensionMismatch("directional_extent: direction has wrong dimension");
  const std::size_t before = oracle.transcript().count();
  const std::size_t n = b.size();
  Vector q(n);
  // Point at distance 1/v along sign*b; it is inside iff sign*(a.b) <= v.
  auto inside_at = [&](int sign, double v) {
    const double t = sign / v;
    for (std::size_t i = 0; i < n; ++i) q[i] = t * b[i];
    return oracle.query(q);
  };

  const double floor_v = 1.0 / t_max;
  int sign = 0;
  if (!inside_at(+1, floor_v))
    sign = +1;
  else if (!inside_at(-1, floor_v))
    sign = -1;
  if (sign == 0) return {0.0, true, oracle.transcript().count() - before};

  double lo = floor_v;  // sign*(a.b) > lo
  double hi = 1.0;
  while (!inside_at(sign, hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 2.0 * eps) {
    const double mid = 0.5 * (lo + hi);
    if (inside_at(sign, mid))
      hi = mid;
    else
      lo = mid;
  }
  return {sign * 0.5 * (lo + hi), false, oracle.transcript().count() - before};
}

LengthEstimate estimate_length(HalfspaceOracle& oracle, std::size_t k, double eps, RngStream& rng, double t_max) {
  if (k == 0) throw PreconditionViolation("estimate_length: need at least one projection");
  const std::size_t n = oracle.dim();
  const std::size_t before = oracle.transcript().count();
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const Vector b = sampling::unit_vector(n, rng);
    const double v = directional_extent(oracle, b, eps, t_max).value;
    sum_sq += v * v;
  }
  LengthEstimate out;
  out.value = std::sqrt(static_cast<double>(n) * sum_sq / static_cast<double>(k));
  out.projections = k;
  out.queries = oracle.transcript().count() - before;
  out.eps = eps;
  return out;
}

std::size_t bisection_steps(double eps) {
  if (!(eps > 0.0)) throw PreconditionViolation("bisection_steps: eps must be positive");
  const double steps = std::ceil(std::log2(2.0 / eps));
  return steps <= 0.0 ? 0 : static_cast<std::size_t>(steps);
}

Recovery recover_matrix(EntryOracle& oracle, double eps) {
  const std::size_t n = oracle.dim();
  const std::size_t steps = bisection_steps(eps);
  const std::size_t before = oracle.transcript().count();
  Recovery out{Matrix(n, n), 0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double lo = -1.0, hi = 1.0;
      for (std::size_t s = 0; s < steps; ++s) {
        const double mid = 0.5 * (lo + hi);
        if (oracle.at_most(i, j, mid))
          hi = mid;
        else
          lo = mid;
      }
      out.matrix(i, j) = 0.5 * (lo + hi);
    }
  out.queries = oracle.transcript().count() - before;
  return out;
}

double recovery_tolerance(std::size_t n, double sigma_floor, double target_rel_error) {
  if (!(sigma_floor > 0.0) || !(target_rel_error > 0.0))
    throw PreconditionViolation("recovery_tolerance: sigma floor and target must be positive");
  const double nd = static_cast<double>(n);
  const double d = 1.0 - std::pow(1.0 + target_rel_error, -1.0 / nd);
  return d * sigma_floor / nd;
}

VolumeRecovery estimate_volume_via_recovery(EntryOracle& oracle, double sigma_floor, double target_rel_error) {
  const std::size_t n = oracle.dim();
  const double eps = recovery_tolerance(n, sigma_floor, target_rel_error);
  Recovery rec = recover_matrix(oracle, eps);
  const double det = geom::determinant(rec.matrix);
  if (det == 0.0) throw DegenerateInput("estimate_volume_via_recovery: recovered matrix is singular");
  return {std::ldexp(1.0, static_cast<int>(n)) / std::abs(det), eps, rec.queries, std::move(rec.matrix)};
}

namespace {

// y = U^T q
Vector unrotate(const Matrix& u, std::span<const double> q) {
  const std::size_t n = u.rows();
  Vector y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[j] += u(i, j) * q[i];
  return y;
}

bool in_slab(std::span<const double> y) {
  for (std::size_t i = 1; i < y.size(); ++i)
    if (std::abs(y[i]) > 1.0) return false;
  return true;
}

}  // namespace

bool AdversarialBody::contains(std::span<const double> q) const {
  if (q.size() != n) throw DimensionMismatch("AdversarialBody: dimension mismatch");
  const Vector y = unrotate(rotation, q);
  const double r = radius();
  return in_slab(y) && geom::norm_sq(y) <= r * r;
}

AdversarialBody make_adversarial_body(BrickVariant variant, std::size_t n, RngStream& rng) {
  if (n < 2) throw PreconditionViolation("make_adversarial_body: n must be at least 2");
  return {variant, sampling::random_rotation(n, rng), n};
}

bool in_symmetric_difference(const Matrix& rotation, std::size_t n, std::span<const double> q) {
  const double r2 = geom::norm_sq(q);
  const double nn = static_cast<double>(n);
  if (r2 <= nn * nn || r2 > 4.0 * nn * nn) return false;
  return in_slab(unrotate(rotation, q));
}

BrickClassifier bayes_brick_classifier(const std::vector<Vector>& queries, std::size_t n) {
  const double nn = static_cast<double>(n);
  std::vector<bool> beyond_brick, informative;
  bool any_informative = false;
  for (const auto& q : queries) {
    const double r2 = geom::norm_sq(q);
    beyond_brick.push_back(r2 > nn * nn);
    informative.push_back(r2 > nn * nn && r2 <= 4.0 * nn * nn);
    any_informative = any_informative || informative.back();
  }
  return [beyond_brick, any_informative](const std::vector<bool>& answers, RngStream& rng) {
    for (std::size_t k = 0; k < answers.size(); ++k)
      if (answers[k] && beyond_brick[k]) return BrickVariant::DoubleBrick;
    if (any_informative) return BrickVariant::Brick;
    return rng.coin() ? BrickVariant::DoubleBrick : BrickVariant::Brick;
  };
}

NonadaptiveOutcome nonadaptive_trial(const std::vector<Vector>& queries, std::size_t n,
                                     const BrickClassifier& classifier, RngStream& rng) {
  NonadaptiveOutcome out;
  out.truth = rng.coin() ? BrickVariant::DoubleBrick : BrickVariant::Brick;
  const AdversarialBody body = make_adversarial_body(out.truth, n, rng);
  Transcript t;
  std::vector<bool> answers;
  answers.reserve(queries.size());
  for (const auto& q : queries) {
    answers.push_back(oracle::membership_query(body, q, t));
    if (in_symmetric_difference(body.rotation, n, q)) ++out.hits;
  }
  out.guess = classifier(answers, rng);
  return out;
}

double bad_surface_hit_bound(std::size_t n) {
  const double nd = static_cast<double>(n);
  return nd * std::pow(2.0 / (nd * std::numbers::pi), nd / 2.0);
}

}  // namespace displab::algorithms
