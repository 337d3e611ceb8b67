#pragma once

// Monte Carlo inner loops shared by the experiments and the benchmark. Trial
// i always draws from rng.child(i), so the Serial and OpenMP backends give
// bitwise identical results.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "displab/geom.hpp"
#include "displab/parallel.hpp"
#include "displab/rng.hpp"

namespace displab::kernels {

using parallel::ExecPolicy;

struct BallMoment {
  double norm_sq = 0.0;   // ||X||^2, X uniform in r B_n
  double inner_sq = 0.0;  // <X, Y>^2, Y uniform on the unit sphere
};

std::vector<BallMoment> ball_moments(std::size_t n, double r, std::size_t count, const RngStream& rng,
                                     const ExecPolicy& policy = {});

// ||G||^2 for G with iid N(0, 1) entries.
std::vector<double> gaussian_norm_sq(std::size_t n, std::size_t count, const RngStream& rng,
                                     const ExecPolicy& policy = {});

// sigma_min(G) sqrt(n) for n x n Gaussian G.
std::vector<double> scaled_min_singular(std::size_t n, std::size_t count, const RngStream& rng,
                                        const ExecPolicy& policy = {});

struct ChainPlan {
  std::size_t chains = 1;
  std::size_t samples_per_chain = 1;
  std::size_t burn_in = 0;
  std::size_t thinning = 1;
};

// ||X||^2 along independent hit-and-run chains, one vector per chain.
std::vector<std::vector<double>> hit_and_run_norm_sq(const geom::HPolytope& p, const geom::Vector& start,
                                                     const ChainPlan& plan, const RngStream& rng,
                                                     const ExecPolicy& policy = {});

// ||X||^2 for exact uniform points by rejection.
std::vector<double> rejection_norm_sq(const geom::HPolytope& p, std::size_t count, const RngStream& rng,
                                      const ExecPolicy& policy = {});

// Fixed axis-probing Q' strategy on matrices from D: query t is the point
// 2^{floor(t / n)} e_{t mod n}.
std::vector<geom::Vector> axis_probe_queries(std::size_t n, std::size_t h);

struct ProbeSample {
  std::uint64_t leaf = 0;  // transcript answers packed in base 2n + 1
  double log_abs_det = 0.0;
};

// Matrix used by probe trial i.
geom::Matrix probe_matrix(std::size_t n, const RngStream& rng, std::size_t i);
std::uint64_t leaf_code(const geom::Matrix& m, const std::vector<geom::Vector>& queries);
std::vector<ProbeSample> probe_leaves(std::size_t n, const std::vector<geom::Vector>& queries, std::size_t count,
                                      const RngStream& rng, const ExecPolicy& policy = {});

}  // namespace displab::kernels
