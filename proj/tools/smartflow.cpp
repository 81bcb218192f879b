#include "smartflow/config.hpp"
#include "smartflow/error.hpp"
#include "smartflow/selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace smartflow;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const CommonOptions &o) {
  RunConfig c;
  if (!o.config_path.empty())
    c = load_config(o.config_path);
  else if (!o.preset_name.empty())
    c = preset(o.preset_name);
  else
    throw ConfigError("no configuration given (use --config or --preset)");
  if (!o.out_dir.empty())
    c.output_dir = o.out_dir;
  if (o.seed)
    c.seed = *o.seed;
  c.validate();
  return c;
}

std::ofstream open_output(const fs::path &path) {
  std::ofstream os(path);
  if (!os)
    throw Error("cannot write '" + path.string() + "'");
  return os;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_solve(const RunConfig &config) {
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  PeriodicSolveReport report = [&] {
    if (config.problem == ProblemKind::FlowRate)
      return picard_periodic(build_flow_rate_problem(config), config.picard);
    return solve_pressure_periodic(build_pressure_problem(config),
                                   config.picard);
  }();
  {
    auto os = open_output(out / "solution.csv");
    report.trajectory.write_csv(os);
  }
  {
    auto os = open_output(out / "gamma.csv");
    report.gamma.write_csv(os);
  }
  const auto entries = report_entries(report);
  {
    auto os = open_output(out / "diagnostics.csv");
    os << "quantity,value\n";
    for (const auto &[k, v] : entries)
      if (k.rfind("diag.", 0) == 0)
        os << k.substr(5) << ',' << v << '\n';
  }
  {
    auto os = open_output(out / "manifest.txt");
    for (const auto &[k, v] : config_entries(config))
      os << "config." << k << " = " << v << '\n';
    for (const auto &[k, v] : entries)
      os << k << " = " << v << '\n';
  }
  std::cout << (report.converged ? "converged" : "not converged") << " after "
            << report.picard_iterations << " periodic sweeps, final residual "
            << num(report.picard_residuals.empty()
                       ? 0.0
                       : report.picard_residuals.back())
            << '\n';
  if (!report.failure.empty())
    std::cerr << "failure: " << report.failure << '\n';
  return report.converged ? 0 : 2;
}

int cmd_exact(const RunConfig &config) {
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  const ExactSolution sol = build_benchmark(config);
  const double t = config.exact_time;
  {
    auto os = open_output(out / "exact.csv");
    os << "x,v\n";
    const std::size_t n = config.exact_samples;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = sol.domain.left + sol.domain.length() *
                                             static_cast<double>(i) /
                                             static_cast<double>(n - 1);
      char line[96];
      std::snprintf(line, sizeof line, "%.10e,%.10e\n", x, sol.v(t, x));
      os << line;
    }
  }
  auto os = open_output(out / "exact_meta.txt");
  auto emit = [&](const std::string &k, double v) {
    os << k << " = " << num(v) << '\n';
    std::cout << k << " = " << num(v) << '\n';
  };
  if (const auto it = sol.metadata.find("a"); it != sol.metadata.end())
    emit("a", it->second);
  emit("alpha", flowrate_of(sol, t));
  emit("gamma", sol.gamma(t));
  emit("t", t);
  return 0;
}

int cmd_convergence(const RunConfig &config, bool parallel) {
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  StudyConfig study = build_study(config);
  study.parallel = parallel;
  const ErrorTable table = run_convergence_study(study);
  {
    auto os = open_output(out / "convergence.csv");
    table.write_csv(os);
  }
  {
    auto os = open_output(out / "convergence.svg");
    table.write_svg(os, "error decay");
  }
  table.write_csv(std::cout);
  bool all = true;
  for (const ErrorRecord &r : table.records)
    all = all && r.converged;
  return all ? 0 : 2;
}

int cmd_selftest(const RunConfig &config, bool inject_fault) {
  SelftestOptions opts;
  opts.seed = config.seed;
  opts.samples = config.selftest_samples;
  opts.inject_sign_flip = inject_fault;
  const auto results = run_selftest(opts);
  print_selftest(std::cout, results);
  for (const SuiteResult &r : results)
    if (!r.passed)
      return 1;
  return 0;
}

void add_common(CLI::App *cmd, CommonOptions &o) {
  cmd->add_option("--config", o.config_path, "configuration file");
  cmd->add_option("--preset", o.preset_name, "built-in configuration preset");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "random seed");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Time-periodic pulsatile flow solver for variable power-law "
               "fluids"};
  app.require_subcommand(1);
  CommonOptions common;
  bool parallel = false;
  bool inject_fault = false;

  auto *solve = app.add_subcommand("solve", "solve a periodic problem");
  add_common(solve, common);
  auto *exact = app.add_subcommand("exact", "sample an exact solution");
  add_common(exact, common);
  auto *conv = app.add_subcommand("convergence", "run a convergence study");
  add_common(conv, common);
  conv->add_flag("--parallel", parallel, "run refinement levels concurrently");
  auto *self = app.add_subcommand("selftest", "run the property suites");
  add_common(self, common);
  self->add_flag("--inject-fault", inject_fault,
                 "flip the sign of the stress in the monotonicity suite");
  auto *presets = app.add_subcommand("presets", "list or print presets");
  std::string show;
  presets->add_option("name", show, "preset to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      if (show.empty()) {
        for (const auto &n : preset_names())
          std::cout << n << '\n';
      } else {
        std::cout << serialize_config(preset(show));
      }
      return 0;
    }
    if (self->parsed()) {
      RunConfig c;
      if (!common.config_path.empty() || !common.preset_name.empty())
        c = resolve_config(common);
      if (common.seed)
        c.seed = *common.seed;
      return cmd_selftest(c, inject_fault);
    }
    const RunConfig config = resolve_config(common);
    if (solve->parsed())
      return cmd_solve(config);
    if (exact->parsed())
      return cmd_exact(config);
    return cmd_convergence(config, parallel);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
