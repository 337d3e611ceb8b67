#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <stdexcept>

#include "displab/kernels.hpp"
#include "displab/parallel.hpp"
#include "displab/polytopes.hpp"

using namespace displab;
using parallel::ExecPolicy;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const ExecPolicy kPolicies[] = {ExecPolicy::openmp(1), ExecPolicy::openmp(8), ExecPolicy::openmp()};

}  // namespace

TEST_CASE("map_indices preserves index order") {
  const auto ref = parallel::map_indices<std::size_t>(1000, [](std::size_t i) { return i * i; }, ExecPolicy::serial());
  for (const auto& p : kPolicies)
    CHECK(parallel::map_indices<std::size_t>(1000, [](std::size_t i) { return i * i; }, p) == ref);
  CHECK(parallel::map_indices<int>(0, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("map_indices rethrows the lowest failing index") {
  for (const auto& p : kPolicies) {
    try {
      parallel::map_indices<int>(
          500,
          [](std::size_t i) -> int {
            if (i == 37 || i == 400) throw std::runtime_error(std::to_string(i));
            return 0;
          },
          p);
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "37");
    }
  }
}

TEST_CASE("ball and gaussian kernels match the serial reference") {
  const RngStream rng(11);
  const auto ref = kernels::ball_moments(7, 1.5, 3000, rng, ExecPolicy::serial());
  const auto g_ref = kernels::gaussian_norm_sq(9, 3000, rng, ExecPolicy::serial());
  const auto s_ref = kernels::scaled_min_singular(5, 500, rng, ExecPolicy::serial());
  for (const auto& p : kPolicies) {
    const auto got = kernels::ball_moments(7, 1.5, 3000, rng, p);
    REQUIRE(got.size() == ref.size());
    bool same = true;
    for (std::size_t i = 0; i < ref.size(); ++i)
      same = same && std::memcmp(&got[i], &ref[i], sizeof(kernels::BallMoment)) == 0;
    CHECK(same);
    CHECK(bitwise_equal(kernels::gaussian_norm_sq(9, 3000, rng, p), g_ref));
    CHECK(bitwise_equal(kernels::scaled_min_singular(5, 500, rng, p), s_ref));
  }
}

TEST_CASE("polytope kernels match the serial reference") {
  const RngStream rng(12);
  const auto cube = geom::HPolytope::cube(5);
  const kernels::ChainPlan plan{6, 50, 100, 5};
  const auto ref = kernels::hit_and_run_norm_sq(cube, geom::Vector(5, 0.0), plan, rng, ExecPolicy::serial());
  const auto rej = kernels::rejection_norm_sq(cube, 2000, rng, ExecPolicy::serial());
  REQUIRE(ref.size() == 6);
  for (const auto& p : kPolicies) {
    const auto got = kernels::hit_and_run_norm_sq(cube, geom::Vector(5, 0.0), plan, rng, p);
    REQUIRE(got.size() == ref.size());
    for (std::size_t c = 0; c < ref.size(); ++c) CHECK(bitwise_equal(got[c], ref[c]));
    CHECK(bitwise_equal(kernels::rejection_norm_sq(cube, 2000, rng, p), rej));
  }
}

TEST_CASE("probe kernel matches the serial reference") {
  const RngStream rng(13);
  const auto queries = kernels::axis_probe_queries(3, 6);
  REQUIRE(queries.size() == 6);
  const auto ref = kernels::probe_leaves(3, queries, 5000, rng, ExecPolicy::serial());
  for (const auto& p : kPolicies) {
    const auto got = kernels::probe_leaves(3, queries, 5000, rng, p);
    REQUIRE(got.size() == ref.size());
    bool same = true;
    for (std::size_t i = 0; i < ref.size(); ++i)
      same = same && got[i].leaf == ref[i].leaf &&
             std::memcmp(&got[i].log_abs_det, &ref[i].log_abs_det, sizeof(double)) == 0;
    CHECK(same);
  }
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(kernels::leaf_code(kernels::probe_matrix(3, rng, i), queries) == ref[i].leaf);
}

TEST_CASE("axis probe queries") {
  const auto q = kernels::axis_probe_queries(2, 5);
  CHECK(q[0] == geom::Vector{1.0, 0.0});
  CHECK(q[1] == geom::Vector{0.0, 1.0});
  CHECK(q[2] == geom::Vector{2.0, 0.0});
  CHECK(q[4] == geom::Vector{4.0, 0.0});
  // Identity rows: only the first pair of probes is accepted.
  const std::uint64_t code = kernels::leaf_code(geom::Matrix::identity(2), q);
  CHECK(code != 0);
  CHECK(kernels::leaf_code(geom::Matrix::identity(2).scaled(0.1), kernels::axis_probe_queries(2, 2)) == 0);
}

TEST_CASE("polytope construction is deterministic") {
  RngStream a(14), b(14);
  const auto pa = polytopes::build_leaf_polytope(6, {5}, a);
  const auto pb = polytopes::build_leaf_polytope(6, {5}, b);
  CHECK(pa.body.facet_count() == 12 + 5);
  CHECK(pa.body.facet_count() == pb.body.facet_count());
  CHECK(pa.log2_volume == pb.log2_volume);
  CHECK(pa.body.min_slack(pa.interior) > 0.0);
  for (double f : pa.kept_fractions) {
    CHECK(f >= 0.5);
    CHECK(f <= 0.75 + 1.0 / 400.0);
  }
  CHECK(pa.log2_volume >= 1.0);
  RngStream c(15);
  const auto r = polytopes::random_facet_polytope(4, 30, c);
  CHECK(r.facet_count() == 30);
  CHECK(r.min_slack(geom::Vector(4, 0.0)) > 0.0);
}
