#include "displab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "displab/error.hpp"

namespace displab::experiments {

std::string ExperimentConfig::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw PreconditionViolation(name + ": missing parameter '" + key + "'");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  const std::string s = text(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw PreconditionViolation(name + ": parameter '" + key + "' is not a number: " + s);
  return v;
}

std::size_t ExperimentConfig::count(const std::string& key) const {
  const double v = number(key);
  if (v < 0.0 || v != std::floor(v) || v > 1e15)
    throw PreconditionViolation(name + ": parameter '" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    ExperimentConfig probe{name, n, trials, seed, {{key, item}}};
    out.push_back(probe.number(key));
  }
  if (out.empty()) throw PreconditionViolation(name + ": parameter '" + key + "' is empty");
  return out;
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::AtMost: return "at_most";
    case Relation::AtLeast: return "at_least";
    case Relation::Equal: return "equal";
  }
  return "at_most";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Info: return "info";
  }
  return "info";
}

Verdict Statistic::verdict() const {
  if (!bound) return Verdict::Info;
  const double b = *bound;
  const double tol = slack_se * std_error + 1e-12 * std::max(1.0, std::abs(b));
  bool ok = false;
  switch (relation) {
    case Relation::AtMost: ok = value <= b + tol; break;
    case Relation::AtLeast: ok = value >= b - tol; break;
    case Relation::Equal: ok = std::abs(value - b) <= tol; break;
  }
  return ok ? Verdict::Pass : Verdict::Fail;
}

void ReportRecord::finalize() {
  bound.reset();
  verdict = Verdict::Info;
  for (const auto& s : statistics) {
    const Verdict v = s.verdict();
    if (v == Verdict::Info) continue;
    if (!bound) {
      bound = Bound{s.label, *s.bound};
      verdict = Verdict::Pass;
    }
    if (v == Verdict::Fail) verdict = Verdict::Fail;
  }
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.name);
  return out;
}

const CatalogEntry& find_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  std::string msg = "unknown experiment '" + name + "'; valid names:";
  for (const auto& n : catalog_names()) msg += " " + n;
  throw CatalogError(msg);
}

ExperimentConfig resolve_config(const ExperimentConfig& cfg) {
  const CatalogEntry& entry = find_entry(cfg.name);
  if (cfg.trials < 1) throw PreconditionViolation(cfg.name + ": trials must be at least 1");
  if (cfg.n < 1) throw PreconditionViolation(cfg.name + ": n must be at least 1");
  ExperimentConfig out = cfg;
  for (const auto& [key, value] : cfg.params) {
    const bool known = std::any_of(entry.params.begin(), entry.params.end(),
                                   [&](const ParamSpec& p) { return p.key == key; });
    if (!known) throw PreconditionViolation(cfg.name + ": unknown parameter '" + key + "'");
  }
  for (const auto& p : entry.params)
    if (!out.has(p.key) && !p.fallback.empty()) out.params[p.key] = p.fallback;
  return out;
}

ReportRecord run_experiment(const ExperimentConfig& cfg, const parallel::ExecPolicy& exec) {
  ReportRecord r;
  r.config = resolve_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  r.statistics = find_entry(r.config.name).run(r.config, exec);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& s : r.statistics)
    if (!(s.std_error >= 0.0)) throw Error(cfg.name + ": negative standard error for " + s.label);
  r.finalize();
  return r;
}

namespace {

void check_distribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw PreconditionViolation(std::string("finite_yao_check: negative weight in ") + what);
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw PreconditionViolation(std::string("finite_yao_check: ") + what + " must sum to 1");
}

}  // namespace

YaoResult finite_yao_check(const geom::Matrix& cost, std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != cost.rows() || nu.size() != cost.cols())
    throw DimensionMismatch("finite_yao_check: weights do not match the cost matrix");
  check_distribution(mu, "mu");
  check_distribution(nu, "nu");
  YaoResult out;
  out.lhs = INFINITY;
  for (std::size_t a = 0; a < cost.cols(); ++a) {
    double avg = 0.0;
    for (std::size_t i = 0; i < cost.rows(); ++i) avg += mu[i] * cost(i, a);
    out.lhs = std::min(out.lhs, avg);
  }
  out.rhs = -INFINITY;
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    double avg = 0.0;
    for (std::size_t a = 0; a < cost.cols(); ++a) avg += nu[a] * cost(i, a);
    out.rhs = std::max(out.rhs, avg);
  }
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

namespace {

// Cell masses by composite Simpson, then cell averages.
stats::PiecewiseConstantDensity discretize(const std::function<double(double)>& f, double support, std::size_t cells) {
  std::vector<double> br(cells + 1), lv(cells);
  for (std::size_t k = 0; k <= cells; ++k) br[k] = support * double(k) / double(cells);
  constexpr int kSub = 32;
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = br[k], h = (br[k + 1] - a) / kSub;
    double s = f(a) + f(br[k + 1]);
    for (int j = 1; j < kSub; ++j) s += (j % 2 ? 4.0 : 2.0) * f(a + j * h);
    lv[k] = std::max(s * h / 3.0, 0.0) / (br[k + 1] - a);
  }
  return stats::PiecewiseConstantDensity::normalized(std::move(br), std::move(lv));
}

}  // namespace

std::vector<stats::PiecewiseConstantDensity> uniform_part_suite() {
  std::vector<stats::PiecewiseConstantDensity> out;
  auto beta = [](double a, double b) {
    return [a, b](double x) { return std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0); };
  };
  auto expo = [](double rate) { return [rate](double x) { return std::exp(-rate * x); }; };
  auto gauss = [](double m, double s) {
    return [m, s](double x) { return std::exp(-0.5 * (x - m) * (x - m) / (s * s)); };
  };

  out.push_back(stats::PiecewiseConstantDensity{});
  out.push_back(stats::PiecewiseConstantDensity::normalized({0.0, 10.0}, {1.0}));
  out.push_back(discretize([](double x) { return x; }, 1.0, 64));
  out.push_back(discretize([](double x) { return 1.0 - x; }, 1.0, 64));
  out.push_back(discretize([](double x) { return 1.0 - std::abs(x - 1.0); }, 2.0, 64));
  out.push_back(discretize(beta(2, 2), 1.0, 64));
  out.push_back(discretize(beta(2, 5), 1.0, 64));
  out.push_back(discretize(beta(5, 2), 1.0, 64));
  out.push_back(discretize(beta(3, 3), 1.0, 64));
  out.push_back(discretize(beta(1, 3), 1.0, 64));
  out.push_back(discretize(beta(3, 1), 1.0, 64));
  out.push_back(discretize(expo(1.0), 5.0, 64));
  out.push_back(discretize(expo(3.0), 4.0, 64));
  out.push_back(discretize(expo(0.2), 20.0, 64));
  out.push_back(discretize(gauss(2.0, 0.5), 4.0, 64));
  out.push_back(discretize(gauss(0.0, 1.0), 3.0, 64));
  out.push_back(discretize(gauss(5.0, 2.0), 10.0, 64));
  out.push_back(stats::PiecewiseConstantDensity::normalized({0.0, 0.25, 1.0}, {2.0, 1.0}));
  out.push_back(stats::PiecewiseConstantDensity::normalized({0.0, 1.0, 2.0, 4.0, 8.0}, {8.0, 4.0, 2.0, 1.0}));
  out.push_back(discretize(expo(1.0), 30.0, 300));
  return out;
}

UniformPartCheck check_uniform_part(const stats::PiecewiseConstantDensity& f, const stats::UniformPart& u) {
  UniformPartCheck c;
  const double width = u.b - u.a;
  const double g = width > 0.0 ? 1.0 / width : 0.0;
  const auto& br = u.remainder.breakpoints();
  bool combo = u.alpha >= 0.0 && u.alpha <= 1.0 && width > 0.0;
  bool nonneg = true;
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const double x = 0.5 * (br[k] + br[k + 1]);
    const double gx = (x >= u.a && x < u.b) ? g : 0.0;
    const double fx = f.density(x);
    const double hx = u.remainder.density(x);
    if (hx < 0.0 || fx - u.alpha * gx < -1e-12 * std::max(1.0, fx)) nonneg = false;
    if (std::abs(u.alpha * gx + (1.0 - u.alpha) * hx - fx) > 1e-9 * std::max(1.0, fx)) combo = false;
  }
  c.convex_combination = combo;
  c.remainder_nonnegative = nonneg;
  c.starts_right_of_mean = u.a >= u.mean;
  c.width_ratio = u.width_ratio(f.support_length());
  return c;
}

}  // namespace displab::experiments
