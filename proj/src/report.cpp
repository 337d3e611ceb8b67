#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "displab/error.hpp"
#include "displab/experiments.hpp"
#include "json.hpp"

namespace displab::experiments {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Relation parse_relation(const std::string& s) {
  if (s == "at_most") return Relation::AtMost;
  if (s == "at_least") return Relation::AtLeast;
  if (s == "equal") return Relation::Equal;
  throw Error("report: unknown relation '" + s + "'");
}

Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "info") return Verdict::Info;
  throw Error("report: unknown verdict '" + s + "'");
}

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }
double number_from(const ojson& j) { return j.is_null() ? NAN : j.get<double>(); }

ojson to_json(const ReportRecord& r, bool wall) {
  ojson j;
  j["experiment"] = r.config.name;
  j["n"] = r.config.n;
  j["trials"] = r.config.trials;
  j["seed"] = r.config.seed;
  ojson params = ojson::object();
  for (const auto& [k, v] : r.config.params) params[k] = v;
  j["params"] = params;
  ojson stats = ojson::array();
  for (const auto& s : r.statistics) {
    ojson e;
    e["label"] = s.label;
    e["value"] = number_or_null(s.value);
    e["stderr"] = number_or_null(s.std_error);
    e["bound"] = s.bound ? number_or_null(*s.bound) : ojson(nullptr);
    e["relation"] = to_string(s.relation);
    e["slack_se"] = s.slack_se;
    e["pass"] = to_string(s.verdict());
    stats.push_back(e);
  }
  j["statistics"] = stats;
  if (r.bound)
    j["bound"] = ojson{{"label", r.bound->label}, {"value", number_or_null(r.bound->value)}};
  else
    j["bound"] = nullptr;
  j["pass"] = to_string(r.verdict);
  if (wall) j["wall_time_s"] = r.wall_seconds;
  return j;
}

ReportRecord from_json(const ojson& j) {
  ReportRecord r;
  r.config.name = j.at("experiment").get<std::string>();
  r.config.n = j.at("n").get<std::size_t>();
  r.config.trials = j.at("trials").get<std::size_t>();
  r.config.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("params").items()) r.config.params[k] = v.get<std::string>();
  for (const auto& e : j.at("statistics")) {
    Statistic s;
    s.label = e.at("label").get<std::string>();
    s.value = number_from(e.at("value"));
    s.std_error = number_from(e.at("stderr"));
    if (!e.at("bound").is_null()) s.bound = e.at("bound").get<double>();
    s.relation = parse_relation(e.at("relation").get<std::string>());
    s.slack_se = e.at("slack_se").get<double>();
    r.statistics.push_back(std::move(s));
  }
  if (!j.at("bound").is_null()) r.bound = Bound{j["bound"].at("label").get<std::string>(), number_from(j["bound"].at("value"))};
  r.verdict = parse_verdict(j.at("pass").get<std::string>());
  if (j.contains("wall_time_s")) r.wall_seconds = j["wall_time_s"].get<double>();
  return r;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

ReportFormat parse_format(const std::string& text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw PreconditionViolation("unknown report format '" + text + "' (csv or json)");
}

std::string report_csv(const std::vector<ReportRecord>& records) {
  std::string out = "experiment,n,trials,seed,label,value,stderr,bound,pass\n";
  for (const auto& r : records)
    for (const auto& s : r.statistics) {
      out += csv_field(r.config.name) + ',' + std::to_string(r.config.n) + ',' + std::to_string(r.config.trials) + ',' +
             std::to_string(r.config.seed) + ',' + csv_field(s.label) + ',' + fmt(s.value) + ',' + fmt(s.std_error) +
             ',' + (s.bound ? fmt(*s.bound) : std::string()) + ',' + to_string(s.verdict()) + '\n';
    }
  return out;
}

std::string report_json(const std::vector<ReportRecord>& records, bool include_wall_time) {
  if (records.size() == 1) return to_json(records.front(), include_wall_time).dump(2) + "\n";
  ojson arr = ojson::array();
  for (const auto& r : records) arr.push_back(to_json(r, include_wall_time));
  return arr.dump(2) + "\n";
}

std::vector<ReportRecord> parse_report_json(const std::string& text) {
  const ojson j = ojson::parse(text);
  std::vector<ReportRecord> out;
  if (j.is_array())
    for (const auto& e : j) out.push_back(from_json(e));
  else
    out.push_back(from_json(j));
  return out;
}

void write_report(const ReportRecord& r, ReportFormat format, const std::string& path) {
  write_reports({r}, format, path);
}

void write_reports(const std::vector<ReportRecord>& records, ReportFormat format, const std::string& path) {
  write_text(format == ReportFormat::Csv ? report_csv(records) : report_json(records), path);
}

std::string svg_plot(const std::vector<ReportRecord>& records) {
  std::map<std::string, std::vector<std::pair<double, double>>> lines;
  for (const auto& r : records)
    for (const auto& s : r.statistics)
      if (std::isfinite(s.value)) lines[r.config.name + ": " + s.label].emplace_back(double(r.config.n), s.value);

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [_, pts] : lines)
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (lines.empty()) x0 = y0 = 0.0, x1 = y1 = 1.0;
  if (x1 == x0) x0 -= 1.0, x1 += 1.0;
  if (y1 == y0) y0 -= 1.0, y1 += 1.0;

  const double w = 720, h = 440, left = 70, right = 250, top = 30, bottom = 50;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << (w - right + left) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">n</text>\n";
  o << "<text x=\"" << left << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\">" << fmt(x0).substr(0, 8) << "</text>\n";
  o << "<text x=\"" << w - right << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\">" << fmt(x1).substr(0, 8) << "</text>\n";
  o << "<text x=\"" << left - 6 << "\" y=\"" << h - bottom << "\" text-anchor=\"end\">" << fmt(y0).substr(0, 8) << "</text>\n";
  o << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << fmt(y1).substr(0, 8) << "</text>\n";
  std::size_t k = 0;
  for (auto& [label, pts] : lines) {
    std::sort(pts.begin(), pts.end());
    const char* c = colours[k % 7];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) o << px(x) << ',' << py(y) << ' ';
    o << "\"/>\n";
    for (const auto& [x, y] : pts) o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
    std::string text;
    for (char ch : label) text += ch == '<' ? std::string("&lt;") : ch == '&' ? std::string("&amp;") : std::string(1, ch);
    o << "<text x=\"" << w - right + 10 << "\" y=\"" << top + 14 * double(k) << "\" fill=\"" << c << "\">" << text << "</text>\n";
    ++k;
  }
  o << "</svg>\n";
  return o.str();
}

std::string constants_json(const Constants& c) {
  ojson j;
  j["expectation_volume_c"] = c.expectation_volume_c;
  j["uniform_part_c0"] = c.uniform_part_c0;
  j["variance_polytope_c"] = c.variance_polytope_c;
  return j.dump(2) + "\n";
}

Constants parse_constants(const std::string& text) {
  const ojson j = ojson::parse(text);
  Constants c;
  c.expectation_volume_c = j.at("expectation_volume_c").get<double>();
  c.uniform_part_c0 = j.at("uniform_part_c0").get<double>();
  c.variance_polytope_c = j.at("variance_polytope_c").get<double>();
  return c;
}

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read constants file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_constants(ss.str());
}

std::string default_constants_path() {
#ifdef DISPLAB_DEFAULT_CONSTANTS
  return DISPLAB_DEFAULT_CONSTANTS;
#else
  return "config/constants.json";
#endif
}

ExperimentConfig with_constants(ExperimentConfig cfg, const Constants& c) {
  auto put = [&](const char* key, double v) {
    if (!cfg.has(key)) cfg.params[key] = fmt(v);
  };
  if (cfg.name == "expectation-volume") put("c", c.expectation_volume_c);
  if (cfg.name == "uniform-part") put("c0", c.uniform_part_c0);
  if (cfg.name == "variance-polytope" && cfg.has("body") && cfg.params.at("body") == "leaf")
    put("c_var", c.variance_polytope_c);
  return cfg;
}

}  // namespace displab::experiments
