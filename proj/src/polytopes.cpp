#include "displab/polytopes.hpp"

#include <algorithm>
#include <cmath>

#include "displab/error.hpp"
#include "displab/sampling.hpp"

namespace displab::polytopes {

LeafPolytope build_leaf_polytope(std::size_t n, const LeafPlan& plan, RngStream& rng) {
  if (n < 1) throw PreconditionViolation("build_leaf_polytope: n must be positive");
  if (plan.samples_per_cut < 2 || !(plan.keep_lo > 0.0) || plan.keep_hi > 1.0 || plan.keep_lo > plan.keep_hi)
    throw PreconditionViolation("build_leaf_polytope: invalid plan");
  const std::size_t burn = plan.burn_in ? plan.burn_in : 20 * n;
  const std::size_t s = plan.samples_per_cut;

  LeafPolytope out{geom::HPolytope::cube(n), geom::Vector(n, 0.0), static_cast<double>(n), {}};
  std::vector<geom::Vector> pts(s);
  std::vector<double> proj(s), sorted(s);
  for (std::size_t c = 0; c < plan.cuts; ++c) {
    sampling::HitAndRunChain chain(out.body, out.interior, rng.child({1, c}));
    chain.advance(burn);
    for (auto& p : pts) {
      chain.advance(n);
      p = chain.point();
    }
    const geom::Vector u = sampling::unit_vector(n, rng);
    for (std::size_t k = 0; k < s; ++k) proj[k] = geom::dot(u, pts[k]);
    sorted = proj;
    std::sort(sorted.begin(), sorted.end());

    const double phi = rng.uniform(plan.keep_lo, plan.keep_hi);
    const auto keep = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(phi * double(s))), 1, s - 1);
    const double tau = 0.5 * (sorted[keep - 1] + sorted[keep]);
    out.body.add_halfspace(u, tau);

    geom::Vector centre(n, 0.0);
    std::size_t kept = 0;
    for (std::size_t k = 0; k < s; ++k)
      if (proj[k] < tau) {
        ++kept;
        for (std::size_t j = 0; j < n; ++j) centre[j] += pts[k][j];
      }
    for (double& v : centre) v /= double(kept);
    out.interior = std::move(centre);

    const double frac = double(kept) / double(s);
    out.kept_fractions.push_back(frac);
    out.log2_volume += std::log2(frac);
  }
  return out;
}

geom::HPolytope random_facet_polytope(std::size_t n, std::size_t facets, RngStream& rng) {
  geom::HPolytope p = geom::HPolytope::cube(n);
  for (std::size_t k = 2 * n; k < facets; ++k) {
    const geom::Vector u = sampling::unit_vector(n, rng);
    double l1 = 0.0;
    for (double v : u) l1 += std::abs(v);
    p.add_halfspace(u, rng.uniform(0.5, 1.0) * l1);
  }
  return p;
}

}  // namespace displab::polytopes
