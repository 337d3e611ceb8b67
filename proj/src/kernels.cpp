#include "displab/kernels.hpp"

#include <cmath>

#include "displab/error.hpp"
#include "displab/oracle.hpp"
#include "displab/sampling.hpp"

namespace displab::kernels {

std::vector<BallMoment> ball_moments(std::size_t n, double r, std::size_t count, const RngStream& rng,
                                     const ExecPolicy& policy) {
  return parallel::map_indices<BallMoment>(
      count,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        const geom::Vector x = sampling::uniform_ball(n, r, s);
        const geom::Vector y = sampling::unit_vector(n, s);
        const double ip = geom::dot(x, y);
        return BallMoment{geom::norm_sq(x), ip * ip};
      },
      policy);
}

std::vector<double> gaussian_norm_sq(std::size_t n, std::size_t count, const RngStream& rng,
                                     const ExecPolicy& policy) {
  return parallel::map_indices<double>(
      count,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double g = s.normal();
          acc += g * g;
        }
        return acc;
      },
      policy);
}

std::vector<double> scaled_min_singular(std::size_t n, std::size_t count, const RngStream& rng,
                                        const ExecPolicy& policy) {
  const double root_n = std::sqrt(static_cast<double>(n));
  return parallel::map_indices<double>(
      count,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        return geom::min_singular_value(sampling::sample_gaussian_matrix(n, s)) * root_n;
      },
      policy);
}

std::vector<std::vector<double>> hit_and_run_norm_sq(const geom::HPolytope& p, const geom::Vector& start,
                                                     const ChainPlan& plan, const RngStream& rng,
                                                     const ExecPolicy& policy) {
  if (plan.chains == 0 || plan.samples_per_chain == 0 || plan.thinning == 0)
    throw PreconditionViolation("hit_and_run_norm_sq: empty chain plan");
  return parallel::map_indices<std::vector<double>>(
      plan.chains,
      [&](std::size_t c) {
        sampling::HitAndRunChain chain(p, start, rng.child(c));
        chain.advance(plan.burn_in);
        std::vector<double> out(plan.samples_per_chain);
        for (auto& v : out) {
          chain.advance(plan.thinning);
          v = geom::norm_sq(chain.point());
        }
        return out;
      },
      policy);
}

std::vector<double> rejection_norm_sq(const geom::HPolytope& p, std::size_t count, const RngStream& rng,
                                      const ExecPolicy& policy) {
  const sampling::SamplerConfig cfg;
  return parallel::map_indices<double>(
      count,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        return geom::norm_sq(sampling::sample_polytope_rejection(p, cfg, s));
      },
      policy);
}

std::vector<geom::Vector> axis_probe_queries(std::size_t n, std::size_t h) {
  std::vector<geom::Vector> out;
  for (std::size_t t = 0; t < h; ++t) {
    geom::Vector q(n, 0.0);
    q[t % n] = std::ldexp(1.0, static_cast<int>(t / n));
    out.push_back(std::move(q));
  }
  return out;
}

geom::Matrix probe_matrix(std::size_t n, const RngStream& rng, std::size_t i) {
  RngStream s = rng.child(i);
  return sampling::sample_matrix_D(n, s);
}

std::uint64_t leaf_code(const geom::Matrix& m, const std::vector<geom::Vector>& queries) {
  const std::uint64_t base = 2 * m.rows() + 1;
  std::uint64_t code = 0;
  for (const auto& q : queries) {
    const oracle::QueryAnswer a = oracle::modified_answer(m, q);
    std::uint64_t digit = 0;
    if (a.kind == oracle::QueryAnswer::Kind::Violation) digit = 1 + 2 * a.row + (a.sign > 0 ? 1 : 0);
    code = code * base + digit;
  }
  return code;
}

std::vector<ProbeSample> probe_leaves(std::size_t n, const std::vector<geom::Vector>& queries, std::size_t count,
                                      const RngStream& rng, const ExecPolicy& policy) {
  return parallel::map_indices<ProbeSample>(
      count,
      [&](std::size_t i) {
        const geom::Matrix m = probe_matrix(n, rng, i);
        const double det = geom::determinant(m);
        return ProbeSample{leaf_code(m, queries), det == 0.0 ? -INFINITY : std::log(std::abs(det))};
      },
      policy);
}

}  // namespace displab::kernels
