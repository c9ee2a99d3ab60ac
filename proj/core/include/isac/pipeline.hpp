// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/radar.hpp"
#include "isac/types.hpp"

#include <vector>

namespace isac {

/// rho ||H X - S||^2 + (1 - rho) ||X - T||^2.
double objective(const SystemConfig& cfg, const CMatrix& h_eff, const Waveform& x,
                 const Template& t, const SymbolMatrix& s);

struct SolveResult {
  Waveform x;
  PhaseShifts theta;
  Template t;

  double initial_objective = 0.0;
  std::vector<double> objective_trace;  // after each outer iteration
  std::vector<double> papr_trace;
  std::vector<double> mui_trace;

  // Objective right after each block of each outer iteration.
  std::vector<double> after_x;
  std::vector<double> after_t;
  std::vector<double> after_theta;

  int iterations_used = 0;
  int inner_iterations = 0;
  int theta_update_calls = 0;
  bool converged = false;
};

/// Alternating minimization over (X, T, theta): inner ADMM for X, Procrustes
/// for T, manifold descent for theta (skipped without RIS). Stops on relative
/// objective change below cfg.outer_tol or after cfg.outer_iters iterations.
/// theta starts from uniform random phases drawn from cfg.rng_seed.
SolveResult solve(const SystemConfig& cfg, const ChannelSet& ch, const SymbolMatrix& s,
                  const DesiredCovariance& cov);

struct ComplexityRow {
  int n_antennas = 0;
  int n_users = 0;
  int n_ris = 0;
  int frame_len = 0;
  int outer_iterations = 0;
  double seconds_per_iteration = 0.0;
  double seconds_waveform = 0.0;  // per iteration, X block
  double seconds_template = 0.0;  // per iteration, T block
  double seconds_phase = 0.0;     // per iteration, theta block
};

/// Wall-clock cost of a fixed number of outer iterations for each config.
/// Convergence checks are disabled so every config runs the same count.
std::vector<ComplexityRow> complexity_probe(const std::vector<SystemConfig>& configs,
                                            int outer_iterations = 5);

}  // namespace isac
