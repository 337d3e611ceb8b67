#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "displab/geom.hpp"

namespace displab::stats {

// Empirical distribution of a scalar statistic; values kept sorted.
class ScalarSampleSet {
 public:
  explicit ScalarSampleSet(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double mean() const;

 private:
  std::vector<double> values_;
};

// Smallest closed interval [lo, hi] holding at least a (1 - p) fraction of
// the empirical mass.
struct DispersionEstimate {
  double p = 0.0;
  double width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t m = 0;
};

// Number of samples an interval must cover: ceil((1 - p) m), with a small
// guard so that e.g. p = 0.1, m = 10 gives 9 rather than 10.
std::size_t required_count(double p, std::size_t m);

// Exact p-dispersion of the empirical measure by an order-statistic window
// scan. Requires 0 < p < 1.
DispersionEstimate p_dispersion(const ScalarSampleSet& s, double p);

// Unbiased sample variance; throws PreconditionViolation when m < 2.
double variance(const ScalarSampleSet& s);
double variance(std::span<const double> xs);
double mean(std::span<const double> xs);

ScalarSampleSet norm_sq_samples(const std::vector<geom::Vector>& points);

// n var||X||^2 / (E||X||^2)^2 from sample moments.
double sigma_k_sq(const std::vector<geom::Vector>& points);
double sigma_k_sq(std::span<const double> norm_sq_values, std::size_t n);

enum class DispBound { BoundedSupport, LogConcave };

struct VarianceDispersionBound {
  double p = 0.0;
  double bound = 0.0;
};

// Bounded support of length M: disp at p* = 3 sigma^2 / (4 M^2) is at least
// sigma. Logconcave density: disp_p >= (1 - p) sigma for the given p.
VarianceDispersionBound disp_lower_bound_from_variance(double sigma_sq, double support_length,
                                                       DispBound kind = DispBound::BoundedSupport, double p = 0.0);

// disp_Z(alpha p) >= disp_X(p) - slack, where Z is an alpha-mixture
// containing X's distribution.
bool mixture_dispersion_check(const ScalarSampleSet& x, const ScalarSampleSet& z, double alpha, double p,
                              double slack = 0.0);

// var(XY)/(E XY)^2 for independent X, Y from the relative variances of each.
double product_relative_variance(double rel_var_x, double rel_var_y);
double relative_variance(std::span<const double> xs);

// Law of total variance on grouped samples (population moments).
struct VarianceDecomposition {
  double total = 0.0;
  double within = 0.0;   // E var(X | Y)
  double between = 0.0;  // var E(X | Y)
};
VarianceDecomposition total_variance(std::span<const double> xs, std::span<const std::size_t> groups);

// Density on [0, M] constant between consecutive breakpoints.
class PiecewiseConstantDensity {
 public:
  // Uniform on [0, 1].
  PiecewiseConstantDensity() : breaks_{0.0, 1.0}, levels_{1.0} {}
  PiecewiseConstantDensity(std::vector<double> breakpoints, std::vector<double> levels);
  // Rescales the levels so the density integrates to 1.
  static PiecewiseConstantDensity normalized(std::vector<double> breakpoints, std::vector<double> levels);

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& levels() const { return levels_; }
  double support_length() const { return breaks_.back(); }

  double density(double x) const;  // right-continuous
  double cdf(double x) const;
  double mean() const;
  double variance() const;
  double mass() const;
  // Integral of (x - c)^2 f(x) over [lo, hi].
  double second_moment_about(double c, double lo, double hi) const;
  // Minimum level over pieces meeting [lo, hi).
  double min_level(double lo, double hi) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> levels_;
};

// log F must be concave on the breakpoint grid: successive slopes of log F
// are nonincreasing up to `slack`.
bool cdf_is_logconcave(const PiecewiseConstantDensity& f, double slack = 1e-9);

struct UniformPart {
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  std::size_t interval_index = 0;  // 0 for the short interval next to the mean
  PiecewiseConstantDensity remainder;

  // alpha (b - a)^2 log2(M / sigma) / sigma^2
  double width_ratio(double support_length) const;
};

// f = alpha g + (1 - alpha) h with g uniform on [a, b], a >= mean, h >= 0.
// The interval is the mean followed by the right-hand dyadic level interval
// carrying the most second moment about the mean. Throws
// PreconditionViolation when the CDF is not logconcave and DegenerateInput
// when sigma = 0.
UniformPart uniform_part_decomposition(const PiecewiseConstantDensity& f);

// CSV with columns statistic,p,width,lo,hi,m.
std::string dispersion_csv(const std::string& statistic, const std::vector<DispersionEstimate>& rows);

}  // namespace displab::stats
