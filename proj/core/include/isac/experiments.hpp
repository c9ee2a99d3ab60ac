// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/config.hpp"
#include "isac/pipeline.hpp"
#include "isac/radar.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace isac {

/// CSV with leading `#` comment lines, one header row and string cells.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const;
  std::string str() const;
};

/// Random draw of one Monte-Carlo trial. The channels always carry the base
/// config's RIS dimension; without_ris() strips it for the baseline.
struct TrialInstance {
  std::uint64_t seed = 0;
  ChannelSet channels;
  SymbolMatrix symbols;
};

std::uint64_t trial_seed(std::uint64_t base_seed, int trial);
TrialInstance make_trial(const SystemConfig& base, int trial);
ChannelSet without_ris(const ChannelSet& ch);

/// Runs the pipeline for one trial; the baseline variant is the same
/// pipeline with L = 0.
SolveResult solve_trial(const SystemConfig& cfg, const TrialInstance& trial,
                        const DesiredCovariance& cov, bool with_ris);

/// Grid, ideal pattern and synthesized covariance shared by every trial.
struct RadarSetup {
  AngleGrid grid;
  RVector desired;
  DesiredCovariance covariance;
};
RadarSetup prepare_radar(const ExperimentSpec& spec);

/// Rescales a beampattern so that its integral over the grid (radians) is Pt.
RVector normalize_beampattern(const RVector& pattern, const AngleGrid& grid, double total_power);

/// Mean over the grid of the squared difference of the normalized patterns.
double beampattern_mse(const Waveform& x, const RadarSetup& radar, double total_power);

/// First outer iteration (1-based) after which the trace stays within
/// rel_band * target of target; -1 when the final entry is outside.
int iterations_to_band(const std::vector<double>& trace, double target, double rel_band);

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

struct PaprTrace {
  double eta = 0.0;
  int trial = 0;
  std::vector<double> papr;
};

struct PaprConvergenceResult {
  std::vector<PaprTrace> traces;  // eta-major, then trial
};

struct SumRateResult {
  std::vector<double> snr_db;
  std::vector<std::vector<double>> with_ris;     // [trial][snr]
  std::vector<std::vector<double>> without_ris;  // [trial][snr]
};

struct BeampatternResult {
  RadarSetup radar;
  RVector desired;      // normalized ideal pattern
  RVector with_ris;     // normalized, averaged over trials
  RVector without_ris;  // normalized, averaged over trials
  std::vector<double> mse_with_ris;
  std::vector<double> mse_without_ris;
};

struct MseVsRhoResult {
  std::vector<double> rho;
  std::vector<std::vector<double>> with_ris;     // [rho][trial], linear MSE
  std::vector<std::vector<double>> without_ris;  // [rho][trial], linear MSE
};

PaprConvergenceResult run_papr_convergence(const ExperimentSpec& spec, int threads = 1);
SumRateResult run_sumrate_vs_snr(const ExperimentSpec& spec, int threads = 1);
BeampatternResult run_beampattern(const ExperimentSpec& spec, int threads = 1);
MseVsRhoResult run_mse_vs_rho(const ExperimentSpec& spec, int threads = 1);

CsvTable to_csv(const ExperimentSpec& spec, const PaprConvergenceResult& r);
CsvTable to_csv(const ExperimentSpec& spec, const SumRateResult& r);
CsvTable to_csv(const ExperimentSpec& spec, const BeampatternResult& r);
CsvTable to_csv(const ExperimentSpec& spec, const MseVsRhoResult& r);

/// Dispatches on spec.kind and renders the result.
CsvTable run_experiment(const ExperimentSpec& spec, int threads = 1);

double mean(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);
double median(std::vector<double> xs);

}  // namespace isac
