// displab: run catalog experiments and write reports.
//
//   displab list
//   displab run <name> --n N[,N...] --trials T --seed S [--param k=v]... --out FILE --format csv|json [--plot FILE.svg]
//   displab calibrate --out constants.json
//
// Exit status: 0 all pass or informational, 1 any fail, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "displab/error.hpp"
#include "displab/experiments.hpp"

namespace ex = displab::experiments;

namespace {

constexpr int kUsage = 2;

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v == 0) throw displab::PreconditionViolation("invalid dimension '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw displab::PreconditionViolation("--n needs at least one dimension");
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw displab::IoError("cannot open '" + path + "' for writing");
  out << text;
}

int cmd_list() {
  for (const auto& e : ex::catalog()) {
    std::cout << e.name << "  (default n=" << e.default_n << ", trials=" << e.default_trials << ")\n    " << e.summary << "\n";
    for (const auto& p : e.params)
      std::cout << "    --param " << p.key << "=" << (p.fallback.empty() ? "<unset>" : p.fallback) << "  " << p.help << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"displab: convex-geometry oracle laboratory"};
  app.require_subcommand(1);

  app.add_subcommand("list", "list catalog experiments and their parameters");

  auto* run = app.add_subcommand("run", "run one experiment for one or more dimensions");
  std::string name, dims, out_path, format = "json", plot_path, constants_path;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  int threads = 0;
  bool wall_time = false;
  std::vector<std::string> params;
  run->add_option("name", name, "catalog key")->required();
  run->add_option("--n", dims, "dimension or comma-separated dimensions");
  run->add_option("--trials", trials, "trial count (default: catalog default)");
  run->add_option("--seed", seed, "64-bit seed");
  run->add_option("--param", params, "experiment parameter key=value")->take_all();
  run->add_option("--out", out_path, "report path (default: stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--plot", plot_path, "SVG plot of statistic against n");
  run->add_option("--threads", threads, "worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  run->add_option("--constants", constants_path, "calibrated constants file");
  run->add_flag("--wall-time", wall_time, "include wall time in JSON reports");

  auto* cal = app.add_subcommand("calibrate", "compute the calibrated constants from the pilot suite");
  std::string cal_out;
  int cal_threads = 0;
  cal->add_option("--out", cal_out, "constants file")->required();
  cal->add_option("--threads", cal_threads, "worker threads")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();

    if (app.got_subcommand("calibrate")) {
      const auto c = ex::calibrate(displab::parallel::ExecPolicy::openmp(cal_threads));
      emit(ex::constants_json(c), cal_out);
      std::cerr << ex::constants_json(c);
      return 0;
    }

    const ex::CatalogEntry& entry = ex::find_entry(name);
    const auto ns = dims.empty() ? std::vector<std::size_t>{entry.default_n} : parse_dims(dims);
    ex::Params kv;
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) throw displab::PreconditionViolation("--param expects key=value, got '" + p + "'");
      kv[p.substr(0, eq)] = p.substr(eq + 1);
    }
    std::optional<ex::Constants> constants;
    if (!constants_path.empty())
      constants = ex::load_constants(constants_path);
    else if (std::filesystem::exists(ex::default_constants_path()))
      constants = ex::load_constants(ex::default_constants_path());

    const auto policy = displab::parallel::ExecPolicy::openmp(threads);
    std::vector<ex::ReportRecord> records;
    bool failed = false;
    for (std::size_t n : ns) {
      ex::ExperimentConfig cfg{name, n, trials ? trials : entry.default_trials, seed, kv};
      if (constants) cfg = ex::with_constants(cfg, *constants);
      records.push_back(ex::run_experiment(cfg, policy));
      const auto& r = records.back();
      std::cerr << name << " n=" << n << " trials=" << r.config.trials << ": " << ex::to_string(r.verdict) << " ("
                << r.wall_seconds << " s)\n";
      failed = failed || r.verdict == ex::Verdict::Fail;
    }
    const auto fmt = ex::parse_format(format);
    emit(fmt == ex::ReportFormat::Csv ? ex::report_csv(records) : ex::report_json(records, wall_time), out_path);
    if (!plot_path.empty()) emit(ex::svg_plot(records), plot_path);
    return failed ? 1 : 0;
  } catch (const displab::CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const displab::PreconditionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const displab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
