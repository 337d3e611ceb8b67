#include <algorithm>
#include <cmath>

#include "displab/error.hpp"
#include "displab/experiments.hpp"

namespace displab::experiments {

namespace {

constexpr std::uint64_t kPilotSeed = 0x5eed'ca1b;

double statistic(const ReportRecord& r, const std::string& label) {
  for (const auto& s : r.statistics)
    if (s.label == label) return s.value;
  throw Error("calibrate: statistic '" + label + "' missing from " + r.config.name);
}

}  // namespace

Constants calibrate(const parallel::ExecPolicy& exec) {
  Constants c;

  double ev = INFINITY;
  for (const char* body : {"cube", "ball"})
    for (std::size_t n : {2, 4, 8, 16, 32}) {
      const ExperimentConfig cfg{"expectation-volume", n, 20000, kPilotSeed, {{"body", body}}};
      ev = std::min(ev, statistic(run_experiment(cfg, exec), "ratio_to_vol_2_over_n_times_n"));
    }
  c.expectation_volume_c = 0.5 * ev;

  double up = INFINITY;
  for (const auto& f : uniform_part_suite())
    up = std::min(up, check_uniform_part(f, stats::uniform_part_decomposition(f)).width_ratio);
  c.uniform_part_c0 = 0.5 * up;

  double vp = INFINITY;
  for (std::size_t n : {8, 16, 32}) {
    const ExperimentConfig cfg{"variance-polytope", n, 5, kPilotSeed,
                               {{"body", "leaf"}, {"chains", "8"}, {"samples", "1000"}}};
    vp = std::min(vp, statistic(run_experiment(cfg, exec), "min_var_times_log2n_over_n"));
  }
  c.variance_polytope_c = 0.5 * vp;
  return c;
}

}  // namespace displab::experiments
