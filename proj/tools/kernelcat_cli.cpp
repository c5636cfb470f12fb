#include <fstream>
#include <future>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "kernelcat/config.hpp"
#include "kernelcat/experiments.hpp"

using namespace krn;
using namespace krn::cli;

namespace {

int exit_code(const Error& e) { return e.code() == ErrorCode::IOError ? 3 : 2; }

// Runs and writes one experiment; returns the verdict line.
std::string run_one(const ExperimentConfig& cfg, bool& ok) {
  const RunResult r = run_experiment(cfg);
  const auto path = cfg.output_path();
  write_output(path, r.csv);
  ok = r.verdict.ok();
  return to_string(cfg.experiment) + ": " + format(r.verdict) + " -> " + path.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Markov kernels, conditional expectations and martingale convergence experiments"};
  app.require_subcommand(1);

  std::vector<std::string> run_paths;
  auto* run = app.add_subcommand("run", "Run experiments from config files (several files run concurrently)");
  run->add_option("config", run_paths, "Config file(s)")->required()->check(CLI::ExistingFile);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", validate_path, "Config file")->required();

  std::string demo_name;
  std::uint64_t demo_seed = 1;
  std::string demo_mode;
  auto* demo = app.add_subcommand("demo", "Run an experiment with its built-in configuration");
  demo->add_option("experiment", demo_name, "Experiment name")->required();
  demo->add_option("--seed", demo_seed, "Seed for the random draws");
  demo->add_option("--mode", demo_mode, "float or rational")->check(CLI::IsMember({"float", "rational"}));

  app.add_subcommand("list", "List the experiment names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      for (const auto& name : experiment_names()) std::cout << name << '\n';
      return 0;
    }

    if (*validate) {
      std::ifstream in(validate_path);
      if (!in) throw Error(ErrorCode::IOError, "cannot read " + validate_path);
      const auto diags = validate_config(in);
      for (const auto& d : diags) std::cout << validate_path << ": " << format(d) << '\n';
      if (diags.empty()) std::cout << validate_path << ": OK\n";
      return diags.empty() ? 0 : 2;
    }

    if (*demo) {
      ExperimentConfig cfg = demo_config(parse_experiment(demo_name));
      cfg.seed = demo_seed;
      if (demo_mode == "float" && cfg.mode == Mode::Rational) {
        cfg.mode = Mode::Float;
        cfg.tolerance = kDefaultTolerance;
      } else if (demo_mode == "rational") {
        cfg.mode = Mode::Rational;
        cfg.tolerance = 0.0;
      }
      bool ok = false;
      std::cout << run_one(cfg, ok) << '\n';
      return ok ? 0 : 1;
    }

    std::vector<ExperimentConfig> configs;
    for (const auto& path : run_paths) configs.push_back(load_config(path));
    std::vector<std::future<std::string>> jobs;
    std::vector<char> oks(configs.size(), 0);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] {
        bool ok = false;
        auto line = run_one(configs[i], ok);
        oks[i] = ok;
        return line;
      }));
    }
    int status = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      try {
        std::cout << jobs[i].get() << '\n';
        if (!oks[i]) status = std::max(status, 1);
      } catch (const Error& e) {
        std::cerr << run_paths[i] << ": " << e.what() << '\n';
        status = std::max(status, exit_code(e));
      } catch (const std::exception& e) {
        std::cerr << run_paths[i] << ": " << e.what() << '\n';
        status = std::max(status, 2);
      }
    }
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
