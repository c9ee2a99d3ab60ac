// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/types.hpp"

#include <vector>

namespace isac {

/// Real embedding of vec(X): first the real parts, then the imaginary parts,
/// both in column-major order. Entry n of vec(X) sits at (n, n + N*M).
RVector embed(const CMatrix& x);
CMatrix unembed(const RVector& xr, int rows, int cols);

/// Least-squares data of the waveform step, min ||A X - B||^2 with
/// A = [sqrt(rho) H; sqrt(1 - rho) I] and B = [sqrt(rho) S; sqrt(1 - rho) T].
///
/// The block-diagonal structure of the vectorized problem means the
/// 2NM x 2NM normal matrix 2 Abar^T Abar + 2 mu I is the real embedding of M
/// copies of 2 (A^H A + mu I); only that N x N factor is stored.
struct StackedSystem {
  CMatrix a;                 // (K + N) x N
  CMatrix b;                 // (K + N) x M
  CMatrix a_h_b;             // A^H B, N x M
  Eigen::LLT<CMatrix> gram;  // A^H A + mu I
  RVector b_bar;             // real embedding of vec(B)
  double mu = 1.0;

  int n_antennas() const { return static_cast<int>(a.cols()); }
  int frame_len() const { return static_cast<int>(b.cols()); }
};

/// Primal, auxiliary and dual variables. All vectors have length 2NM and use
/// the embed() layout; gamma_n and w_n are the pairs at (n, n + NM).
struct AdmmState {
  RVector x;
  RVector alpha;
  RVector gamma;
  RVector u;
  RVector w;
  std::vector<double> residual_history;

  /// x = alpha = gamma = embed(x0) with zero duals.
  static AdmmState from_waveform(const Waveform& x0);

  std::size_t n_entries() const { return static_cast<std::size_t>(x.size() / 2); }
};

struct Duals {
  RVector u;
  RVector w;
};

/// Power and peak limits of the waveform block.
struct WaveformLimits {
  double total_power = 0.1;  // Pt
  double papr_limit = 2.0;   // eta
  int n_antennas = 1;        // N
  int frame_len = 1;         // M

  double energy() const { return frame_len * total_power; }
  double peak_power() const { return total_power * papr_limit / n_antennas; }
};

StackedSystem build_stacked(const CMatrix& h_eff, const SymbolMatrix& s, const Template& t,
                            double rho, double mu);

/// Minimizer of the augmented Lagrangian in x. M independent N-dimensional
/// complex solves.
RVector x_update(const StackedSystem& sys, const AdmmState& st);

/// Normalized ascent direction x + u / mu scaled onto ||alpha||^2 = M Pt.
/// A zero direction returns `previous` unchanged.
RVector alpha_update(const RVector& x, const RVector& u, double mu, int frame_len,
                     double total_power, const RVector& previous);

/// Per-entry projection of E_n x + w_n / mu onto the disk of radius sqrt(Pt eta / N).
RVector gamma_update(const RVector& x, const RVector& w, double mu, double total_power,
                     double papr_limit, int n_antennas);

/// u += mu (x - alpha), w_n += mu (E_n x - gamma_n).
Duals dual_update(const RVector& x, const RVector& alpha, const RVector& gamma, const RVector& u,
                  const RVector& w, double mu);

/// max(||x - alpha||, max_n ||E_n x - gamma_n||).
double primal_residual(const AdmmState& st);

struct InnerDiagnostics {
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
};

struct InnerResult {
  Waveform x;
  InnerDiagnostics diagnostics;
};

/// Runs x -> alpha -> gamma -> dual cycles until the primal residual drops
/// below tol * sqrt(M Pt) or `max_iters` is reached. The returned waveform is
/// rescaled onto the power sphere. `st` is updated in place so callers can
/// warm-start the next solve. Throws SolverAbort on non-finite iterates.
InnerResult solve_inner(const StackedSystem& sys, AdmmState& st, const WaveformLimits& limits,
                        int max_iters, double tol);

}  // namespace isac
