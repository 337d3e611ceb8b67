#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "displab/algorithms.hpp"
#include "displab/error.hpp"
#include "displab/experiments.hpp"
#include "displab/kernels.hpp"
#include "displab/oracle.hpp"
#include "displab/polytopes.hpp"
#include "displab/sampling.hpp"
#include "displab/stats.hpp"

namespace displab::experiments {

namespace {

using parallel::ExecPolicy;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out{stats::mean(xs), 0.0};
  if (xs.size() > 1) out.se = std::sqrt(stats::variance(xs) / double(xs.size()));
  return out;
}

MeanSe proportion(std::size_t hits, std::size_t total) {
  const double p = double(hits) / double(total);
  return {p, std::sqrt(p * (1.0 - p) / double(total))};
}

// Statistic of the pooled data with the spread of per-batch values as error.
template <class F>
MeanSe batch_estimate(const std::vector<std::vector<double>>& batches, F stat) {
  std::vector<double> pooled, per;
  for (const auto& b : batches) {
    pooled.insert(pooled.end(), b.begin(), b.end());
    if (b.size() > 1) per.push_back(stat(std::span<const double>(b)));
  }
  MeanSe out{stat(std::span<const double>(pooled)), 0.0};
  if (per.size() > 1) out.se = std::sqrt(stats::variance(per) / double(per.size()));
  return out;
}

std::vector<std::vector<double>> split(const std::vector<double>& xs, std::size_t batches) {
  batches = std::clamp<std::size_t>(batches, 1, xs.size());
  std::vector<std::vector<double>> out(batches);
  for (std::size_t b = 0; b < batches; ++b)
    out[b].assign(xs.begin() + std::ptrdiff_t(b * xs.size() / batches),
                  xs.begin() + std::ptrdiff_t((b + 1) * xs.size() / batches));
  return out;
}

Statistic checked(std::string label, MeanSe v, double bound, Relation rel, double slack = 3.0) {
  return {std::move(label), v.mean, v.se, bound, rel, slack};
}

Statistic info(std::string label, double value, double se = 0.0) {
  return {std::move(label), value, se, std::nullopt, Relation::AtMost, 3.0};
}

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::uint64_t name_key(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

RngStream root_stream(const ExperimentConfig& cfg) { return RngStream(cfg.seed, {name_key(cfg.name), cfg.n}); }

double positive(const ExperimentConfig& cfg, const std::string& key) {
  const double v = cfg.number(key);
  if (!(v > 0.0)) throw PreconditionViolation(cfg.name + ": parameter '" + key + "' must be positive");
  return v;
}

// ---------------------------------------------------------------------------

std::vector<Statistic> run_ball_moments(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const double nd = double(n);
  const double r = cfg.text("r") == "sqrt_n" ? std::sqrt(nd) : cfg.number("r");
  if (r < 0.0) throw PreconditionViolation("ball-moments: radius must be non-negative");
  const auto samples = kernels::ball_moments(n, r, cfg.trials, root_stream(cfg), exec);
  std::vector<double> norm_sq, inner_sq;
  for (const auto& s : samples) {
    norm_sq.push_back(s.norm_sq);
    inner_sq.push_back(s.inner_sq);
  }
  return {checked("mean_norm_sq", mean_se(norm_sq), nd * r * r / (nd + 2.0), Relation::Equal),
          checked("mean_inner_sq", mean_se(inner_sq), r * r / (nd + 2.0), Relation::Equal)};
}

std::vector<Statistic> run_gaussian_tails(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const double nd = double(cfg.n);
  const double eps = positive(cfg, "eps");
  const double eps_lower = positive(cfg, "eps_lower");
  if (eps_lower >= 1.0) throw PreconditionViolation("gaussian-tails: eps_lower must be below 1");
  const auto xs = kernels::gaussian_norm_sq(cfg.n, cfg.trials, root_stream(cfg), exec);
  const auto upper = std::count_if(xs.begin(), xs.end(), [&](double v) { return v >= (1.0 + eps) * nd; });
  const auto lower = std::count_if(xs.begin(), xs.end(), [&](double v) { return v <= (1.0 - eps_lower) * nd; });
  return {checked("upper_tail", proportion(std::size_t(upper), xs.size()),
                  std::pow((1.0 + eps) * std::exp(-eps), nd / 2.0), Relation::AtMost),
          checked("lower_tail", proportion(std::size_t(lower), xs.size()),
                  std::pow((1.0 - eps_lower) * std::exp(eps_lower), nd / 2.0), Relation::AtMost)};
}

std::vector<Statistic> run_min_singular(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const auto ts = cfg.numbers("t");
  for (double t : ts)
    if (!(t > 0.0)) throw PreconditionViolation("min-singular: thresholds must be positive");
  const auto xs = kernels::scaled_min_singular(cfg.n, cfg.trials, root_stream(cfg), exec);
  std::vector<Statistic> out;
  for (double t : ts) {
    const auto hits = std::count_if(xs.begin(), xs.end(), [&](double v) { return v <= t; });
    out.push_back(checked("prob_le_" + num_label(t), proportion(std::size_t(hits), xs.size()), t, Relation::AtMost));
  }
  return out;
}

std::vector<Statistic> run_expectation_volume(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const double nd = double(n);
  const std::string body = cfg.text("body");
  if (body != "cube" && body != "ball") throw PreconditionViolation("expectation-volume: body must be cube or ball");
  const bool cube = body == "cube";
  const RngStream rng = root_stream(cfg).child(cube ? 0 : 1);
  const auto xs = parallel::map_indices<double>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        return geom::norm_sq(cube ? sampling::uniform_cube(n, s) : sampling::uniform_ball(n, 1.0, s));
      },
      exec);
  // vol^{2/n}: 4 for the cube, exp(2/n log vol B_n) for the unit ball.
  const double log_vol = cube ? nd * std::log(2.0) : 0.5 * nd * std::log(std::numbers::pi) - std::lgamma(0.5 * nd + 1.0);
  const double scale = std::exp(2.0 * log_vol / nd) * nd;
  const MeanSe m = mean_se(xs);
  std::vector<Statistic> out;
  if (cfg.has("c"))
    out.push_back(checked("mean_norm_sq", m, positive(cfg, "c") * scale, Relation::AtLeast));
  else
    out.push_back(info("mean_norm_sq", m.mean, m.se));
  out.push_back(info("ratio_to_vol_2_over_n_times_n", m.mean / scale, m.se / scale));
  return out;
}

struct PolytopeMeasure {
  double var_norm_sq = 0.0;
  double sigma_k_sq = 0.0;
  double log2_volume = 0.0;
};

PolytopeMeasure measure_polytope(const geom::HPolytope& p, const geom::Vector& start, std::size_t chains,
                                 std::size_t per_chain, const RngStream& rng) {
  const std::size_t n = p.dim();
  const kernels::ChainPlan plan{chains, per_chain, 100 * n, n};
  const auto runs = kernels::hit_and_run_norm_sq(p, start, plan, rng, ExecPolicy::serial());
  std::vector<double> pooled;
  for (const auto& r : runs) pooled.insert(pooled.end(), r.begin(), r.end());
  return {stats::variance(pooled), stats::sigma_k_sq(pooled, n), 0.0};
}

std::vector<Statistic> run_variance_polytope(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const double nd = double(n);
  if (n < 2) throw PreconditionViolation("variance-polytope: n must be at least 2");
  const std::string body = cfg.text("body");
  const double log_factor = std::log2(nd) / nd;
  const RngStream rng = root_stream(cfg);
  std::vector<Statistic> out;

  if (body == "cube") {
    const std::size_t chains = cfg.text("chains") == "auto" ? 100 : std::max<std::size_t>(2, cfg.count("chains"));
    const std::size_t per_chain = std::max<std::size_t>(2, cfg.trials / chains);
    const geom::HPolytope cube = geom::HPolytope::cube(n);
    const kernels::ChainPlan plan{chains, per_chain, 100 * n, n};
    const auto har = kernels::hit_and_run_norm_sq(cube, geom::Vector(n, 0.0), plan, rng.child(0), exec);
    const auto rej = split(kernels::rejection_norm_sq(cube, std::max<std::size_t>(2 * chains, cfg.trials), rng.child(1), exec), chains);
    auto var = [](std::span<const double> v) { return stats::variance(v); };
    auto sig = [n](std::span<const double> v) { return stats::sigma_k_sq(v, n); };
    const MeanSe hv = batch_estimate(har, var), rv = batch_estimate(rej, var);
    out.push_back(checked("hit_and_run_var_norm_sq", hv, 4.0 * nd / 45.0, Relation::Equal));
    out.push_back(checked("hit_and_run_sigma_k_sq", batch_estimate(har, sig), 0.8, Relation::Equal));
    out.push_back(checked("rejection_var_norm_sq", rv, 4.0 * nd / 45.0, Relation::Equal));
    out.push_back(checked("rejection_sigma_k_sq", batch_estimate(rej, sig), 0.8, Relation::Equal));
    out.push_back(checked("var_difference", {hv.mean - rv.mean, std::hypot(hv.se, rv.se)}, 0.0, Relation::Equal));
    out.push_back(info("var_times_log2n_over_n", rv.mean * log_factor, rv.se * log_factor));
    return out;
  }

  if (body != "leaf" && body != "random") throw PreconditionViolation("variance-polytope: body must be cube, leaf or random");
  const bool leaf = body == "leaf";
  const std::size_t chains = cfg.text("chains") == "auto" ? 8 : std::max<std::size_t>(1, cfg.count("chains"));
  const std::size_t per_chain = std::max<std::size_t>(2, cfg.count("samples"));
  std::size_t facets = 0;
  if (!leaf) {
    const double f = std::pow(nd, cfg.number("k"));
    if (!(f < 1e7)) throw PreconditionViolation("variance-polytope: too many facets");
    facets = static_cast<std::size_t>(std::llround(f));
  }
  const std::size_t cuts = leaf ? n - 1 : 0;
  const auto measures = parallel::map_indices<PolytopeMeasure>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child({2, i});
        if (leaf) {
          polytopes::LeafPlan plan;
          plan.cuts = cuts;
          const auto lp = polytopes::build_leaf_polytope(n, plan, s);
          auto m = measure_polytope(lp.body, lp.interior, chains, per_chain, s.child(7));
          m.log2_volume = lp.log2_volume;
          return m;
        }
        const auto p = polytopes::random_facet_polytope(n, facets, s);
        return measure_polytope(p, geom::Vector(n, 0.0), chains, per_chain, s.child(7));
      },
      exec);

  std::vector<double> ratios, sigmas, vols;
  for (const auto& m : measures) {
    ratios.push_back(m.var_norm_sq * log_factor);
    sigmas.push_back(m.sigma_k_sq);
    vols.push_back(m.log2_volume);
  }
  if (leaf && cfg.has("c_var")) {
    const double c = positive(cfg, "c_var");
    const auto above = std::count_if(ratios.begin(), ratios.end(), [&](double v) { return v >= c; });
    out.push_back(checked("fraction_ratio_at_least_c", {double(above) / double(ratios.size()), 0.0},
                          cfg.number("min_fraction"), Relation::AtLeast, 0.0));
  }
  const MeanSe mr = mean_se(ratios), ms = mean_se(sigmas);
  out.push_back(info("mean_var_times_log2n_over_n", mr.mean, mr.se));
  out.push_back(info("min_var_times_log2n_over_n", *std::min_element(ratios.begin(), ratios.end())));
  out.push_back(info("mean_sigma_k_sq", ms.mean, ms.se));
  if (leaf)
    out.push_back(info("min_log2_volume_estimate", *std::min_element(vols.begin(), vols.end())));
  else
    out.push_back(info("facets", double(std::max(facets, 2 * n))));
  return out;
}

std::vector<Statistic> run_p1_p2(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const double nd = double(n);
  const double alpha = positive(cfg, "alpha");
  const double beta = positive(cfg, "beta");
  if (alpha <= 1.0 || beta <= 1.0) throw PreconditionViolation("p1-p2-properties: alpha and beta must exceed 1");
  const RngStream rng = root_stream(cfg);
  struct Row {
    double log_p1 = 0.0;
    double normalized_det = 0.0;
  };
  const auto rows = parallel::map_indices<Row>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        const geom::Matrix r = sampling::sample_matrix_D(n, s);
        Row out;
        for (std::size_t k = 0; k < n; ++k) out.log_p1 += std::log(geom::row_projection_residual(r, k));
        out.normalized_det = geom::normalized_determinant(r);
        return out;
      },
      exec);
  std::size_t p1 = 0, p2 = 0;
  std::vector<double> dets;
  for (const auto& r : rows) {
    if (r.log_p1 <= nd * std::log(alpha)) ++p1;
    if (r.normalized_det >= std::pow(beta, -nd)) ++p2;
    dets.push_back(r.normalized_det);
  }
  std::sort(dets.begin(), dets.end());
  const double target = std::pow(nd, -alpha);
  const std::size_t idx = std::min(dets.size() - 1, static_cast<std::size_t>(std::floor(target * double(dets.size()))));
  const double q = dets[idx];
  return {checked("prob_p1", proportion(p1, rows.size()), 1.0 - 1.0 / (alpha * alpha), Relation::AtLeast),
          info("prob_p2", proportion(p2, rows.size()).mean, proportion(p2, rows.size()).se),
          info("p2_target_probability", 1.0 - target),
          info("beta_needed", q > 0.0 ? std::pow(q, -1.0 / nd) : INFINITY)};
}

std::size_t probe_query_count(std::size_t n) {
  const double nd = double(n);
  return static_cast<std::size_t>(std::floor((nd * nd - 2.0) / std::log2(2.0 * nd + 1.0)));
}

std::vector<oracle::QueryAnswer> decode_leaf(std::uint64_t code, std::size_t n, std::size_t h) {
  const std::uint64_t base = 2 * n + 1;
  std::vector<oracle::QueryAnswer> out(h);
  for (std::size_t t = h; t-- > 0;) {
    const std::uint64_t d = code % base;
    code /= base;
    out[t] = d == 0 ? oracle::QueryAnswer::yes()
                    : oracle::QueryAnswer::violation(std::size_t((d - 1) / 2), (d - 1) % 2 ? +1 : -1);
  }
  return out;
}

std::vector<Statistic> run_det_dispersion(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  if (n < 2 || n > 4) throw PreconditionViolation("det-dispersion: n must be 2, 3 or 4");
  const double p = cfg.number("p");
  if (!(p > 0.0 && p < 1.0)) throw PreconditionViolation("det-dispersion: p must be in (0, 1)");
  const double heavy = positive(cfg, "heavy");
  const std::size_t h = probe_query_count(n);
  const auto queries = kernels::axis_probe_queries(n, h);
  const RngStream rng = root_stream(cfg);
  const auto samples = kernels::probe_leaves(n, queries, cfg.trials, rng, exec);

  std::map<std::uint64_t, std::vector<double>> groups;
  for (const auto& s : samples) groups[s.leaf].push_back(s.log_abs_det);
  const double threshold = heavy * double(cfg.trials) / double(groups.size());

  std::vector<Statistic> out;
  out.push_back(info("queries", double(h)));
  out.push_back(info("leaves", double(groups.size())));
  std::vector<double> rel;
  std::vector<std::uint64_t> heavy_codes;
  std::size_t heavy_mass = 0;
  std::vector<Statistic> per_leaf;
  for (const auto& [code, logs] : groups) {
    if (double(logs.size()) < threshold) continue;
    heavy_codes.push_back(code);
    heavy_mass += logs.size();
    if (logs.size() < 2) continue;
    const auto d = stats::p_dispersion(stats::ScalarSampleSet(logs), p);
    rel.push_back(std::expm1(d.width));
    per_leaf.push_back(info("rel_disp_leaf_" + std::to_string(code), rel.back()));
  }
  out.push_back(info("heavy_leaves", double(heavy_codes.size())));
  out.push_back(info("heavy_mass", double(heavy_mass) / double(cfg.trials)));
  if (!rel.empty()) {
    std::vector<double> sorted = rel;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(info("min_rel_disp", sorted.front()));
    out.push_back(info("median_rel_disp", sorted[sorted.size() / 2]));
  }

  if (n <= 3) {
    const std::size_t checks = std::min(cfg.trials, cfg.count("check"));
    std::size_t mismatches = 0;
    for (std::uint64_t code : heavy_codes) {
      const auto answers = decode_leaf(code, n, h);
      auto part = oracle::ProductPart::full(n, oracle::BaseDomain::Ball);
      for (std::size_t t = 0; t < h; ++t) part = oracle::refine_product_part(part, queries[t], answers[t]);
      for (std::size_t i = 0; i < checks; ++i) {
        const bool inside = part.contains(kernels::probe_matrix(n, rng, i));
        if (inside != (samples[i].leaf == code)) ++mismatches;
      }
    }
    out.push_back(info("partition_mismatches", double(mismatches)));
  }
  out.insert(out.end(), per_leaf.begin(), per_leaf.end());
  return out;
}

std::vector<Statistic> run_length_estimation(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const double nd = double(n);
  if (n < 2) throw PreconditionViolation("length-estimation: n must be at least 2");
  const std::size_t k = cfg.text("k") == "auto" ? n * static_cast<std::size_t>(std::ceil(std::log2(nd))) : cfg.count("k");
  const double eps = positive(cfg, "eps");
  const double tol = cfg.text("tolerance") == "auto" ? 1.0 / std::sqrt(std::log2(nd)) : positive(cfg, "tolerance");
  const double floor_len = std::sqrt(nd) - 4.0 * std::sqrt(std::log(nd));
  const RngStream rng = root_stream(cfg);
  struct Trial {
    double error = 0.0;
    double queries = 0.0;
  };
  const auto trials = parallel::map_indices<Trial>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        geom::Vector a = sampling::uniform_cube(n, s);
        for (int tries = 0; geom::norm(a) < floor_len; ++tries) {
          if (tries > 100000) throw DegenerateInput("length-estimation: length condition is unreachable");
          a = sampling::uniform_cube(n, s);
        }
        const double truth = geom::norm(a);
        algorithms::HalfspaceOracle oracle(std::move(a));
        const auto est = algorithms::estimate_length(oracle, k, eps, s);
        return Trial{std::abs(est.value - truth), double(est.queries)};
      },
      exec);
  std::vector<double> errors, queries;
  std::size_t ok = 0;
  for (const auto& t : trials) {
    errors.push_back(t.error);
    queries.push_back(t.queries);
    if (t.error <= tol) ++ok;
  }
  const MeanSe me = mean_se(errors);
  return {checked("success_rate", {double(ok) / double(trials.size()), 0.0}, cfg.number("success"), Relation::AtLeast, 0.0),
          info("tolerance", tol),
          info("projections", double(k)),
          info("mean_abs_error", me.mean, me.se),
          info("mean_queries", stats::mean(queries))};
}

std::vector<Statistic> run_volume_recovery(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const double floor = positive(cfg, "sigma_floor");
  const double c = positive(cfg, "c");
  const RngStream rng = root_stream(cfg);
  struct Trial {
    double rel_error = 0.0;
    double queries = 0.0;
    double expected = 0.0;
  };
  const auto trials = parallel::map_indices<Trial>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        geom::Matrix a = sampling::sample_matrix_Dprime(n, s);
        for (int tries = 0; geom::min_singular_value(a) < floor; ++tries) {
          if (tries > 100000) throw DegenerateInput("volume-recovery: sigma floor is unreachable");
          a = sampling::sample_matrix_Dprime(n, s);
        }
        const double truth = geom::parallelopiped_volume(a);
        algorithms::EntryOracle oracle(std::move(a));
        const auto est = algorithms::estimate_volume_via_recovery(oracle, floor, c);
        return Trial{std::abs(est.volume - truth) / truth, double(est.queries),
                     double(n * n * algorithms::bisection_steps(est.eps))};
      },
      exec);
  std::size_t ok = 0, mismatched = 0;
  double worst = 0.0;
  for (const auto& t : trials) {
    if (t.rel_error <= c) ++ok;
    if (t.queries != t.expected) ++mismatched;
    worst = std::max(worst, t.rel_error);
  }
  return {checked("success_fraction", {double(ok) / double(trials.size()), 0.0}, 1.0, Relation::AtLeast, 0.0),
          checked("query_count_mismatches", {double(mismatched), 0.0}, 0.0, Relation::AtMost, 0.0),
          info("max_rel_error", worst),
          info("queries_per_matrix", trials.front().queries),
          info("eps", algorithms::recovery_tolerance(n, floor, c))};
}

std::vector<Statistic> run_nonadaptive(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  if (n < 2) throw PreconditionViolation("nonadaptive: n must be at least 2");
  const double radius = positive(cfg, "radius_factor") * double(n);
  const std::size_t q = cfg.count("queries");
  if (q == 0) throw PreconditionViolation("nonadaptive: need at least one query");
  const RngStream rng = root_stream(cfg);
  std::vector<geom::Vector> queries;
  for (std::size_t k = 0; k < q; ++k) {
    RngStream s = rng.child({0, k});
    geom::Vector v = sampling::unit_vector(n, s);
    for (double& x : v) x *= radius;
    queries.push_back(std::move(v));
  }
  const auto classifier = algorithms::bayes_brick_classifier(queries, n);
  const auto outcomes = parallel::map_indices<algorithms::NonadaptiveOutcome>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child({1, i});
        return algorithms::nonadaptive_trial(queries, n, classifier, s);
      },
      exec);
  std::size_t hits = 0, any_hit = 0, correct = 0;
  for (const auto& o : outcomes) {
    hits += o.hits;
    any_hit += o.hits > 0 ? 1 : 0;
    correct += o.guess == o.truth ? 1 : 0;
  }
  const MeanSe any = proportion(any_hit, outcomes.size());
  const MeanSe success = proportion(correct, outcomes.size());
  return {checked("hit_rate_per_query", proportion(hits, outcomes.size() * q), algorithms::bad_surface_hit_bound(n),
                  Relation::AtMost),
          checked("success_rate", {success.mean, std::hypot(success.se, any.se)}, 0.5 + any.mean, Relation::AtMost),
          info("any_hit_rate", any.mean, any.se)};
}

std::vector<Statistic> run_product_part(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t n = cfg.n;
  const std::size_t q = cfg.count("queries");
  const std::size_t samples = std::max<std::size_t>(1, cfg.count("samples"));
  const RngStream rng = root_stream(cfg);
  struct Trial {
    double mismatches = 0.0;
    double inside = 0.0;
  };
  const auto trials = parallel::map_indices<Trial>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child({0, i});
        const geom::Parallelopiped hidden{sampling::sample_matrix_D(n, s)};
        oracle::Transcript t;
        for (std::size_t k = 0; k < q; ++k) {
          geom::Vector v = sampling::unit_vector(n, s);
          const double scale = s.uniform(0.25, 1.5);
          for (double& x : v) x *= scale;
          oracle::modified_query(hidden, v, t);
        }
        const auto part = oracle::fold_transcript(t, n, oracle::BaseDomain::Ball);
        Trial out;
        for (std::size_t j = 0; j < samples; ++j) {
          RngStream sj = rng.child({1, i, j});
          const geom::Parallelopiped m{sampling::sample_matrix_D(n, sj)};
          const bool in_part = part.contains(m.a);
          if (in_part != oracle::replay_matches(t, m)) out.mismatches += 1.0;
          if (in_part) out.inside += 1.0;
        }
        out.inside /= double(samples);
        return out;
      },
      exec);
  double mismatches = 0.0;
  std::vector<double> inside;
  for (const auto& t : trials) {
    mismatches += t.mismatches;
    inside.push_back(t.inside);
  }
  return {checked("mismatches", {mismatches, 0.0}, 0.0, Relation::AtMost, 0.0),
          info("mean_fraction_in_part", stats::mean(inside))};
}

std::vector<Statistic> run_finite_yao(const ExperimentConfig& cfg, const ExecPolicy& exec) {
  const std::size_t rows = cfg.count("inputs"), cols = cfg.count("algorithms");
  if (rows == 0 || cols == 0) throw PreconditionViolation("finite-yao: empty cost matrix");
  const RngStream rng = root_stream(cfg);
  auto weights = [](std::size_t k, RngStream& s) {
    std::vector<double> w(k);
    double total = 0.0;
    for (double& v : w) total += (v = -std::log(s.uniform_pos()));
    for (double& v : w) v /= total;
    return w;
  };
  const auto results = parallel::map_indices<YaoResult>(
      cfg.trials,
      [&](std::size_t i) {
        RngStream s = rng.child(i);
        geom::Matrix c(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t a = 0; a < cols; ++a) c(r, a) = s.uniform();
        const auto mu = weights(rows, s);
        const auto nu = weights(cols, s);
        return finite_yao_check(c, mu, nu);
      },
      exec);
  std::size_t violations = 0;
  double gap = INFINITY;
  for (const auto& r : results) {
    if (!r.holds) ++violations;
    gap = std::min(gap, r.rhs - r.lhs);
  }
  return {checked("violations", {double(violations), 0.0}, 0.0, Relation::AtMost, 0.0), info("min_gap", gap)};
}

std::vector<Statistic> run_uniform_part(const ExperimentConfig& cfg, const ExecPolicy&) {
  const auto suite = uniform_part_suite();
  const std::size_t count = std::min(cfg.trials, suite.size());
  std::size_t failures = 0;
  double min_ratio = INFINITY;
  for (std::size_t i = 0; i < count; ++i) {
    const auto u = stats::uniform_part_decomposition(suite[i]);
    const auto c = check_uniform_part(suite[i], u);
    if (!c.ok()) ++failures;
    min_ratio = std::min(min_ratio, c.width_ratio);
  }
  std::vector<Statistic> out{checked("postcondition_failures", {double(failures), 0.0}, 0.0, Relation::AtMost, 0.0)};
  if (cfg.has("c0"))
    out.push_back(checked("min_width_ratio", {min_ratio, 0.0}, positive(cfg, "c0"), Relation::AtLeast, 0.0));
  else
    out.push_back(info("min_width_ratio", min_ratio));
  out.push_back(info("densities", double(count)));
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"ball-moments", "E||X||^2 = n r^2/(n+2) and E<X,Y>^2 = r^2/(n+2) for X uniform in r B_n", 10, 100000,
       {{"r", "1", "ball radius, or sqrt_n"}}, run_ball_moments},
      {"gaussian-tails", "Pr(||X||^2 >= (1+e)n) and Pr(||X||^2 <= (1-e)n) against the Gaussian tail bounds", 20, 100000,
       {{"eps", "1", "upper-tail deviation"}, {"eps_lower", "0.5", "lower-tail deviation, below 1"}},
       run_gaussian_tails},
      {"min-singular", "Pr(sigma_min sqrt(n) <= t) <= t for Gaussian matrices", 10, 10000,
       {{"t", "0.1,0.2,0.5", "comma-separated thresholds"}}, run_min_singular},
      {"expectation-volume", "E||X||^2 >= c vol^{2/n} n on the cube or unit ball", 8, 100000,
       {{"body", "cube", "cube or ball"}, {"c", "", "calibrated constant"}}, run_expectation_volume},
      {"variance-polytope",
       "var||X||^2 and sigma_K^2 on cubes (trials = samples), leaf polytopes or random n^k-facet polytopes "
       "(trials = polytopes)",
       8, 100000,
       {{"body", "cube", "cube, leaf or random"},
        {"chains", "auto", "hit-and-run chains; auto is 100 for the cube and 8 per polytope otherwise"},
        {"samples", "1000", "samples per chain for leaf and random"},
        {"k", "2", "facet exponent for random polytopes"},
        {"c_var", "", "calibrated lower constant for leaf polytopes"},
        {"min_fraction", "0.9", "required fraction of leaf polytopes above c_var"}},
       run_variance_polytope},
      {"p1-p2-properties", "Pr(P1(R, alpha^n)) >= 1 - 1/alpha^2 and Pr(P2(R, beta^-n)) for R from D", 4, 10000,
       {{"alpha", "2", "P1 parameter, above 1"}, {"beta", "4", "P2 parameter, above 1"}}, run_p1_p2},
      {"det-dispersion", "relative 0.1-dispersion of |det| within heavy leaves of a fixed axis-probing Q' strategy",
       3, 1000000,
       {{"p", "0.1", "dispersion level"},
        {"heavy", "0.25", "heavy leaf threshold as a multiple of 1/#leaves"},
        {"check", "2000", "samples used for the partition cross-check (n <= 3)"}},
       run_det_dispersion},
      {"length-estimation", "success rate of random-projection length estimation through a halfspace oracle", 64, 200,
       {{"k", "auto", "projections; auto is n ceil(log2 n)"},
        {"eps", "0.001", "binary search tolerance"},
        {"tolerance", "auto", "allowed additive error; auto is 1/sqrt(log2 n)"},
        {"success", "0.75", "required success rate"}},
       run_length_estimation},
      {"volume-recovery", "entry-oracle volume estimate with query count audit", 5, 100,
       {{"sigma_floor", "0.1", "conditioning floor on sigma_min"}, {"c", "0.05", "target relative error"}},
       run_volume_recovery},
      {"nonadaptive", "hit rate and Bayes success against brick / double brick", 6, 100000,
       {{"radius_factor", "1.5", "query radius as a multiple of n"}, {"queries", "1", "fixed queries"}},
       run_nonadaptive},
      {"product-part", "folded Q' transcripts accept exactly the matrices that replay them", 3, 50,
       {{"queries", "2", "queries per transcript"}, {"samples", "10000", "matrices per transcript"}},
       run_product_part},
      {"finite-yao", "inf_a E_mu C <= sup_i E_nu C on random cost matrices", 2, 1000,
       {{"inputs", "5", "rows"}, {"algorithms", "7", "columns"}}, run_finite_yao},
      {"uniform-part", "uniform-part decomposition postconditions over the density suite (trials = densities)", 1, 20,
       {{"c0", "", "calibrated width constant"}}, run_uniform_part},
  };
  return entries;
}

}  // namespace displab::experiments
