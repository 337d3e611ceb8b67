#include <algorithm>
#include <cmath>
#include <limits>

#include "displab/error.hpp"
#include "displab/stats.hpp"

namespace displab::stats {

PiecewiseConstantDensity::PiecewiseConstantDensity(std::vector<double> breakpoints, std::vector<double> levels)
    : breaks_(std::move(breakpoints)), levels_(std::move(levels)) {
  if (breaks_.size() < 2 || levels_.size() + 1 != breaks_.size())
    throw PreconditionViolation("PiecewiseConstantDensity: need k+1 breakpoints for k levels");
  if (breaks_.front() != 0.0) throw PreconditionViolation("PiecewiseConstantDensity: support must start at 0");
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
    if (!(breaks_[k + 1] > breaks_[k])) throw PreconditionViolation("PiecewiseConstantDensity: breakpoints must increase");
  for (double l : levels_)
    if (!(l >= 0.0) || !std::isfinite(l)) throw PreconditionViolation("PiecewiseConstantDensity: levels must be finite and >= 0");
  if (std::abs(mass() - 1.0) > 1e-9) throw PreconditionViolation("PiecewiseConstantDensity: density must integrate to 1");
}

PiecewiseConstantDensity PiecewiseConstantDensity::normalized(std::vector<double> breakpoints, std::vector<double> levels) {
  double total = 0.0;
  for (std::size_t k = 0; k < levels.size() && k + 1 < breakpoints.size(); ++k)
    total += levels[k] * (breakpoints[k + 1] - breakpoints[k]);
  if (!(total > 0.0)) throw PreconditionViolation("PiecewiseConstantDensity: zero total mass");
  for (double& l : levels) l /= total;
  return {std::move(breakpoints), std::move(levels)};
}

double PiecewiseConstantDensity::mass() const {
  double s = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) s += levels_[k] * (breaks_[k + 1] - breaks_[k]);
  return s;
}

double PiecewiseConstantDensity::density(double x) const {
  if (x < 0.0 || x >= breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return levels_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double PiecewiseConstantDensity::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (x <= breaks_[k]) break;
    s += levels_[k] * (std::min(x, breaks_[k + 1]) - breaks_[k]);
  }
  return std::min(s, 1.0);
}

double PiecewiseConstantDensity::mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const double a = breaks_[k], b = breaks_[k + 1];
    s += levels_[k] * 0.5 * (b * b - a * a);
  }
  return s;
}

double PiecewiseConstantDensity::second_moment_about(double c, double lo, double hi) const {
  double s = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const double l = std::max(lo, breaks_[k]);
    const double u = std::min(hi, breaks_[k + 1]);
    if (u <= l) continue;
    s += levels_[k] * (std::pow(u - c, 3) - std::pow(l - c, 3)) / 3.0;
  }
  return s;
}

double PiecewiseConstantDensity::variance() const {
  return second_moment_about(mean(), 0.0, breaks_.back());
}

double PiecewiseConstantDensity::min_level(double lo, double hi) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < levels_.size(); ++k)
    if (breaks_[k] < hi && breaks_[k + 1] > lo) m = std::min(m, levels_[k]);
  return std::isfinite(m) ? m : 0.0;
}

bool cdf_is_logconcave(const PiecewiseConstantDensity& f, double slack) {
  std::vector<double> xs, logf;
  for (double x : f.breakpoints()) {
    const double F = f.cdf(x);
    if (F > 0.0) {
      xs.push_back(x);
      logf.push_back(std::log(F));
    }
  }
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double slope = (logf[k + 1] - logf[k]) / (xs[k + 1] - xs[k]);
    if (slope > prev_slope + slack) return false;
    prev_slope = slope;
  }
  return true;
}

double UniformPart::width_ratio(double support_length) const {
  return alpha * (b - a) * (b - a) * std::log2(support_length / sigma) / (sigma * sigma);
}

namespace {

// Smallest x >= start with f(x) <= threshold (f is right-continuous and
// vanishes past the support).
double first_point_below(const PiecewiseConstantDensity& f, double start, double threshold) {
  if (f.density(start) <= threshold) return start;
  const auto& br = f.breakpoints();
  const auto& lv = f.levels();
  for (std::size_t k = 0; k < lv.size(); ++k)
    if (br[k] > start && lv[k] <= threshold) return br[k];
  return f.support_length();
}

}  // namespace

UniformPart uniform_part_decomposition(const PiecewiseConstantDensity& f) {
  if (!cdf_is_logconcave(f)) throw PreconditionViolation("uniform_part_decomposition: distribution function is not logconcave");
  const double big_m = f.support_length();
  const double mu = f.mean();
  const double sigma = std::sqrt(f.variance());
  if (!(sigma > 0.0)) throw DegenerateInput("uniform_part_decomposition: zero variance");

  UniformPart out;
  out.mean = mu;
  out.sigma = sigma;
  out.a = mu;

  const double x0 = first_point_below(f, mu, 1.0 / sigma);
  if (x0 > mu + sigma / 64.0) {
    out.b = mu + sigma / 64.0;
    out.interval_index = 0;
  } else {
    const auto m = static_cast<std::size_t>(std::ceil(3.0 * std::log2(big_m / sigma) + 14.0));
    double prev = x0;
    double best_mass = -1.0;
    double threshold = 1.0 / sigma;
    for (std::size_t i = 1; i <= m; ++i) {
      threshold *= 0.5;
      const double xi = first_point_below(f, prev, threshold);
      const double moment = f.second_moment_about(mu, prev, xi);
      if (xi > mu && moment > best_mass) {
        best_mass = moment;
        out.b = xi;
        out.interval_index = i;
      }
      prev = xi;
    }
    if (best_mass < 0.0) throw DegenerateInput("uniform_part_decomposition: no interval to the right of the mean");
  }

  const double width = out.b - out.a;
  out.alpha = f.min_level(out.a, out.b) * width;
  const double g_level = out.alpha / width;

  std::vector<double> br = f.breakpoints();
  br.push_back(out.a);
  br.push_back(out.b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  std::vector<double> lv;
  lv.reserve(br.size() - 1);
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const double mid = 0.5 * (br[k] + br[k + 1]);
    const double g = (mid >= out.a && mid < out.b) ? g_level : 0.0;
    lv.push_back(out.alpha < 1.0 ? std::max((f.density(mid) - g) / (1.0 - out.alpha), 0.0) : g_level);
  }
  out.remainder = PiecewiseConstantDensity::normalized(std::move(br), std::move(lv));
  return out;
}

}  // namespace displab::stats
