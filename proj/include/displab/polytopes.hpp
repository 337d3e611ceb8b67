#pragma once

#include <cstddef>
#include <vector>

#include "displab/geom.hpp"
#include "displab/rng.hpp"

namespace displab::polytopes {

struct LeafPlan {
  std::size_t cuts = 1;
  std::size_t samples_per_cut = 400;
  std::size_t burn_in = 0;  // 0: 20 n
  double keep_lo = 0.5;     // each cut keeps a fraction in [keep_lo, keep_hi]
  double keep_hi = 0.75;
};

struct LeafPolytope {
  geom::HPolytope body;
  geom::Vector interior;
  double log2_volume = 0.0;  // sampling estimate
  std::vector<double> kept_fractions;
};

// [-1,1]^n cut by `cuts` halfspaces with uniformly random normals. Each
// offset is an empirical quantile of u . X over hit-and-run points of the
// current body, so every cut keeps at least half of the estimated volume and
// n - 1 cuts leave an estimated volume of at least 2.
LeafPolytope build_leaf_polytope(std::size_t n, const LeafPlan& plan, RngStream& rng);

// The cube plus (facets - 2n) random halfspaces u . x <= tau ||u||_1 with
// tau uniform in [0.5, 1]; the origin stays interior.
geom::HPolytope random_facet_polytope(std::size_t n, std::size_t facets, RngStream& rng);

}  // namespace displab::polytopes
