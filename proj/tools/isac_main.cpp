// SPDX-License-Identifier: Apache-2.0
//
// isac run <spec.cfg> --out <dir> [--seed S] [--trials T] [--threads P]
// isac demo fig2|fig3|fig4a|fig4b [--out <dir>] [--seed S] [--trials T] [--threads P]
//
// Exit codes: 0 success, 2 spec error, 3 solver abort.

#include "isac/config.hpp"
#include "isac/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitSpecError = 2;
constexpr int kExitSolverAbort = 3;

struct CommonOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "Override the base RNG seed");
  cmd->add_option("--trials", o.trials, "Override the number of Monte-Carlo trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Worker threads (ISAC_THREADS overrides)")
      ->check(CLI::PositiveNumber);
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("ISAC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw isac::SpecError(std::string("ISAC_THREADS must be a positive integer, got '") + env + "'");
  }
  return requested;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw isac::SpecError("cannot write '" + path.string() + "'");
  out << text;
}

int execute(isac::ExperimentSpec spec, const CommonOptions& o) {
  if (o.seed) spec.base.rng_seed = *o.seed;
  if (o.trials) spec.n_trials = *o.trials;
  spec.validate();
  const int threads = resolve_threads(o.threads);
  const isac::CsvTable csv = isac::run_experiment(spec, threads);
  const fs::path target = fs::path(o.out_dir) / fs::path(spec.output).filename();
  write_text(target, csv.str());
  std::cout << "wrote " << target.string() << " (" << csv.rows.size() << " rows)\n";
  return 0;
}

isac::ExperimentKind demo_kind(const std::string& name) {
  if (name == "fig2") return isac::ExperimentKind::PaprConvergence;
  if (name == "fig3") return isac::ExperimentKind::SumRateVsSnr;
  if (name == "fig4a") return isac::ExperimentKind::Beampattern;
  if (name == "fig4b") return isac::ExperimentKind::MseVsRho;
  throw isac::SpecError("unknown demo '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint ISAC waveform and RIS phase design with tunable PAPR"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string spec_path;
  auto* run = app.add_subcommand("run", "Run an experiment described by a spec file");
  run->add_option("spec", spec_path, "Spec file (key = value lines)")->required();
  run->add_option("--out", run_opts.out_dir, "Output directory")->required();
  add_common(run, run_opts);

  CommonOptions demo_opts;
  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Write the default spec of a figure and run it");
  demo->add_option("figure", demo_name, "fig2 | fig3 | fig4a | fig4b")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4a", "fig4b"}));
  demo->add_option("--out", demo_opts.out_dir, "Output directory");
  add_common(demo, demo_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSpecError;
  }

  try {
    if (*run) return execute(isac::load_spec(spec_path), run_opts);

    isac::ExperimentSpec spec = isac::default_spec(demo_kind(demo_name));
    if (demo_opts.seed) spec.base.rng_seed = *demo_opts.seed;
    if (demo_opts.trials) spec.n_trials = *demo_opts.trials;
    const fs::path spec_file = fs::path(demo_opts.out_dir) / (demo_name + ".cfg");
    write_text(spec_file, isac::format_spec(spec));
    std::cout << "wrote " << spec_file.string() << "\n";
    return execute(std::move(spec), demo_opts);
  } catch (const isac::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const isac::SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return kExitSolverAbort;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitSpecError;
  }
}
