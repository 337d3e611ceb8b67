#include "displab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "displab/error.hpp"

namespace displab::stats {

ScalarSampleSet::ScalarSampleSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw PreconditionViolation("ScalarSampleSet: need at least one sample");
  std::sort(values_.begin(), values_.end());
}

double ScalarSampleSet::mean() const { return stats::mean(values_); }

std::size_t required_count(double p, std::size_t m) {
  const double need = std::ceil((1.0 - p) * static_cast<double>(m) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(need, 1.0)), 1, m);
}

DispersionEstimate p_dispersion(const ScalarSampleSet& s, double p) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionViolation("p_dispersion: p must lie in (0, 1)");
  const auto& x = s.values();
  const std::size_t m = x.size();
  const std::size_t k = required_count(p, m);
  DispersionEstimate best{p, std::numeric_limits<double>::infinity(), 0.0, 0.0, m};
  for (std::size_t i = 0; i + k <= m; ++i) {
    const double w = x[i + k - 1] - x[i];
    if (w < best.width) {
      best.width = w;
      best.lo = x[i];
      best.hi = x[i + k - 1];
    }
  }
  return best;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw PreconditionViolation("mean: empty sample");
  double s = 0.0;
  for (double v : xs) s += v;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw PreconditionViolation("variance: need at least two samples");
  const double mu = mean(xs);
  double ss = 0.0;
  for (double v : xs) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(xs.size() - 1);
}

double variance(const ScalarSampleSet& s) { return variance(std::span<const double>(s.values())); }

ScalarSampleSet norm_sq_samples(const std::vector<geom::Vector>& points) {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(geom::norm_sq(p));
  return ScalarSampleSet(std::move(v));
}

double sigma_k_sq(std::span<const double> norm_sq_values, std::size_t n) {
  if (norm_sq_values.size() < 2) throw PreconditionViolation("sigma_k_sq: need at least two points");
  const double mu = mean(norm_sq_values);
  if (mu == 0.0) throw DegenerateInput("sigma_k_sq: zero mean squared norm");
  return static_cast<double>(n) * variance(norm_sq_values) / (mu * mu);
}

double sigma_k_sq(const std::vector<geom::Vector>& points) {
  if (points.size() < 2) throw PreconditionViolation("sigma_k_sq: need at least two points");
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(geom::norm_sq(p));
  return sigma_k_sq(v, points.front().size());
}

VarianceDispersionBound disp_lower_bound_from_variance(double sigma_sq, double support_length, DispBound kind,
                                                       double p) {
  if (!(sigma_sq > 0.0)) throw PreconditionViolation("disp_lower_bound_from_variance: variance must be positive");
  const double sigma = std::sqrt(sigma_sq);
  if (kind == DispBound::LogConcave) {
    if (!(p > 0.0 && p < 1.0)) throw PreconditionViolation("disp_lower_bound_from_variance: p must lie in (0, 1)");
    return {p, (1.0 - p) * sigma};
  }
  if (!(support_length > 0.0)) throw PreconditionViolation("disp_lower_bound_from_variance: support must be positive");
  if (sigma > support_length) throw PreconditionViolation("disp_lower_bound_from_variance: sigma exceeds support length");
  return {3.0 * sigma_sq / (4.0 * support_length * support_length), sigma};
}

bool mixture_dispersion_check(const ScalarSampleSet& x, const ScalarSampleSet& z, double alpha, double p,
                              double slack) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionViolation("mixture_dispersion_check: alpha must lie in (0, 1]");
  return p_dispersion(z, alpha * p).width >= p_dispersion(x, p).width - slack;
}

double relative_variance(std::span<const double> xs) {
  const double mu = mean(xs);
  if (mu == 0.0) throw DegenerateInput("relative_variance: zero mean");
  double ss = 0.0;
  for (double v : xs) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(xs.size()) / (mu * mu);
}

double product_relative_variance(double rel_var_x, double rel_var_y) {
  return (1.0 + rel_var_x) * (1.0 + rel_var_y) - 1.0;
}

VarianceDecomposition total_variance(std::span<const double> xs, std::span<const std::size_t> groups) {
  if (xs.size() != groups.size() || xs.empty()) throw DimensionMismatch("total_variance: size mismatch");
  struct Acc {
    double n = 0, s = 0, ss = 0;
  };
  std::map<std::size_t, Acc> by;
  double s = 0.0, ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    auto& a = by[groups[k]];
    a.n += 1;
    a.s += xs[k];
    a.ss += xs[k] * xs[k];
    s += xs[k];
    ss += xs[k] * xs[k];
  }
  const double n = static_cast<double>(xs.size());
  const double mu = s / n;
  VarianceDecomposition out;
  out.total = ss / n - mu * mu;
  for (const auto& [g, a] : by) {
    const double gm = a.s / a.n;
    out.within += (a.n / n) * (a.ss / a.n - gm * gm);
    out.between += (a.n / n) * (gm - mu) * (gm - mu);
  }
  return out;
}

std::string dispersion_csv(const std::string& statistic, const std::vector<DispersionEstimate>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "statistic,p,width,lo,hi,m\n";
  for (const auto& r : rows) os << statistic << ',' << r.p << ',' << r.width << ',' << r.lo << ',' << r.hi << ',' << r.m << '\n';
  return os.str();
}

}  // namespace displab::stats
