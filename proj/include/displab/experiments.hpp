#pragma once

// Experiment catalog, report records and their serialization, the finite
// Yao checker, and calibration of the constants that the bounds leave
// unspecified.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "displab/geom.hpp"
#include "displab/parallel.hpp"
#include "displab/stats.hpp"

namespace displab::experiments {

using Params = std::map<std::string, std::string>;

struct ExperimentConfig {
  std::string name;
  std::size_t n = 2;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  Params params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;  // comma separated

  bool operator==(const ExperimentConfig&) const = default;
};

enum class Relation { AtMost, AtLeast, Equal };
enum class Verdict { Pass, Fail, Info };

std::string to_string(Relation r);
std::string to_string(Verdict v);

struct Statistic {
  std::string label;
  double value = 0.0;
  double std_error = 0.0;
  std::optional<double> bound;
  Relation relation = Relation::AtMost;
  double slack_se = 3.0;  // Monte Carlo slack in standard errors

  // Info when there is no bound.
  Verdict verdict() const;
  bool operator==(const Statistic&) const = default;
};

struct Bound {
  std::string label;
  double value = 0.0;
  bool operator==(const Bound&) const = default;
};

struct ReportRecord {
  ExperimentConfig config;
  std::vector<Statistic> statistics;
  std::optional<Bound> bound;  // headline: the first bounded statistic
  Verdict verdict = Verdict::Info;
  double wall_seconds = 0.0;

  // Sets bound and verdict from the statistics.
  void finalize();
  bool operator==(const ReportRecord&) const = default;
};

struct ParamSpec {
  std::string key;
  std::string fallback;  // empty: optional, no default
  std::string help;
};

using Runner = std::function<std::vector<Statistic>(const ExperimentConfig&, const parallel::ExecPolicy&)>;

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::size_t default_n = 2;
  std::size_t default_trials = 1;
  std::vector<ParamSpec> params;
  Runner run;
};

const std::vector<CatalogEntry>& catalog();
std::vector<std::string> catalog_names();
// Throws CatalogError listing the valid names.
const CatalogEntry& find_entry(const std::string& name);

// Fills in parameter defaults and rejects unknown keys or trials = 0.
ExperimentConfig resolve_config(const ExperimentConfig& cfg);

// Deterministic in cfg; the thread count only changes wall time.
ReportRecord run_experiment(const ExperimentConfig& cfg, const parallel::ExecPolicy& exec = {});

struct YaoResult {
  double lhs = 0.0;  // min over algorithms of the mu-average cost
  double rhs = 0.0;  // max over inputs of the nu-average cost
  bool holds = false;
};

// cost(i, a): input i (rows) against algorithm a (columns); mu over inputs,
// nu over algorithms.
YaoResult finite_yao_check(const geom::Matrix& cost, std::span<const double> mu, std::span<const double> nu);

enum class ReportFormat { Csv, Json };
ReportFormat parse_format(const std::string& text);

std::string report_csv(const std::vector<ReportRecord>& records);
// One record serializes as an object, several as an array.
std::string report_json(const std::vector<ReportRecord>& records, bool include_wall_time = false);
std::vector<ReportRecord> parse_report_json(const std::string& text);

void write_report(const ReportRecord& r, ReportFormat format, const std::string& path);
void write_reports(const std::vector<ReportRecord>& records, ReportFormat format, const std::string& path);

// Statistic against n, one line per (experiment, label).
std::string svg_plot(const std::vector<ReportRecord>& records);

// Constants that the bounds only fix up to an absolute factor.
struct Constants {
  double expectation_volume_c = 0.0;
  double uniform_part_c0 = 0.0;
  double variance_polytope_c = 0.0;
  bool operator==(const Constants&) const = default;
};

std::string constants_json(const Constants& c);
Constants parse_constants(const std::string& text);
Constants load_constants(const std::string& path);
std::string default_constants_path();

// Adds the matching constant to cfg.params when the experiment uses one and
// the caller did not set it.
ExperimentConfig with_constants(ExperimentConfig cfg, const Constants& c);

// Half the smallest value seen over a fixed pilot suite, for each constant.
Constants calibrate(const parallel::ExecPolicy& exec = {});

// Twenty densities with logconcave distribution functions (uniform,
// triangular, beta, truncated exponential and Gaussian, step-decreasing),
// discretized by cell averages.
std::vector<stats::PiecewiseConstantDensity> uniform_part_suite();

struct UniformPartCheck {
  bool convex_combination = false;
  bool remainder_nonnegative = false;
  bool starts_right_of_mean = false;
  double width_ratio = 0.0;

  bool ok() const { return convex_combination && remainder_nonnegative && starts_right_of_mean; }
};

UniformPartCheck check_uniform_part(const stats::PiecewiseConstantDensity& f, const stats::UniformPart& u);

}  // namespace displab::experiments
