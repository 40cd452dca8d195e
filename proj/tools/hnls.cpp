// Command-line driver for the HNLS verification lab: config-driven
// experiments with CSV/JSON evidence output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hnls/io.hpp"

namespace fs = std::filesystem;
using namespace hnls;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string theta_csv;
  std::string format = "csv";
  std::int64_t seed = -1;
  bool dump_frames = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file (ExperimentConfig)");
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--theta", opts.theta_csv, "comma-separated theta list override");
  cmd->add_option("--seed", opts.seed, "RNG seed override");
  cmd->add_option("--format", opts.format, "diagnostics format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--frames", opts.dump_frames, "also dump raw frames.bin");
}

std::vector<double> parse_theta_csv(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

ExperimentConfig make_config(const CommonOpts& opts) {
  ExperimentConfig config;
  if (!opts.config_path.empty()) config = load_config(opts.config_path);
  if (!opts.theta_csv.empty()) config.thetas = parse_theta_csv(opts.theta_csv);
  if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
  config.validate();
  return config;
}

// returns 0 when the experiment passed, 2 otherwise
int write_report(const CommonOpts& opts, const ExperimentConfig& config, json body) {
  fs::create_directories(opts.out_dir);
  body["config"] = config_to_json(config);
  const fs::path path = fs::path(opts.out_dir) / "report.json";
  std::ofstream out(path);
  out << body.dump(2) << "\n";
  const bool pass = body.value("pass", false);
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << body.value("experiment", "experiment")
            << " -> " << path.string() << "\n";
  return pass ? 0 : 2;
}

void write_trajectory_outputs(const CommonOpts& opts, const ExperimentConfig& config,
                              const Trajectory& traj) {
  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  if (opts.format == "csv") {
    write_diagnostics_csv(traj, config.thetas, (dir / "diagnostics.csv").string());
  } else {
    std::ofstream out(dir / "diagnostics.json");
    out << diagnostics_to_json(traj, config.thetas).dump(2) << "\n";
  }
  if (opts.dump_frames) write_frames_bin(traj, (dir / "frames.bin").string());
  for (const auto& w : traj.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hnls: pseudospectral verification lab for the Airy-Schrodinger equation"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* solve = app.add_subcommand("solve", "evolve and record diagnostics");
  auto* persistence =
      app.add_subcommand("persistence", "weighted-norm rate and Gronwall envelope");
  auto* apriori = app.add_subcommand("apriori", "I1/I2 conservation and H^k bounds");
  auto* approx =
      app.add_subcommand("approx", "frequency-truncation convergence ladder");
  auto* contdep =
      app.add_subcommand("contdep", "continuous dependence on initial data");
  auto* theorem = app.add_subcommand("theorem", "end-to-end persistence pipeline");
  auto* family = app.add_subcommand("lemma-family", "plateau family conditions");
  auto* gauge = app.add_subcommand("gauge-check", "gauge transformation checks");
  auto* mixed = app.add_subcommand("mixed-monitor", "mixed-norm boundedness battery");
  for (auto* cmd : {solve, persistence, apriori, approx, contdep, theorem, family,
                    gauge, mixed})
    add_common(cmd, opts);

  CLI11_PARSE(app, argc, argv);

  int rc = 0;
  try {
    const ExperimentConfig config = make_config(opts);
    if (solve->parsed()) {
      const SolveReport rep = run_solve(config);
      write_trajectory_outputs(opts, config, rep.trajectory);
      rc = write_report(opts, config,
                        json{{"experiment", "solve"},
                             {"pass", rep.pass},
                             {"blew_up", rep.trajectory.blew_up},
                             {"frames", rep.trajectory.frames.size()},
                             {"warnings", rep.trajectory.warnings}});
    } else if (persistence->parsed()) {
      rc = write_report(opts, config, to_json(run_persistence(config)));
    } else if (apriori->parsed()) {
      rc = write_report(opts, config, to_json(run_apriori(config)));
    } else if (approx->parsed()) {
      rc = write_report(opts, config, to_json(run_approximation(config)));
    } else if (contdep->parsed()) {
      rc = write_report(opts, config, to_json(run_continuous_dependence(config)));
    } else if (theorem->parsed()) {
      const TheoremReport rep = run_theorem(config);
      // evidence bundle: report plus the diagnostics of the underlying run
      const SolveReport sol = run_solve(config);
      write_trajectory_outputs(opts, config, sol.trajectory);
      rc = write_report(opts, config, to_json(rep));
    } else if (family->parsed()) {
      rc = write_report(opts, config, to_json(run_lemma_family(config)));
    } else if (gauge->parsed()) {
      rc = write_report(opts, config, to_json(run_gauge_check(config)));
    } else if (mixed->parsed()) {
      rc = write_report(opts, config, to_json(run_mixed_norm_monitor(config)));
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return rc;
}
