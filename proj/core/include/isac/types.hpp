// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace isac {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// N x M transmit block; column m is the antenna vector of symbol slot m.
using Waveform = CMatrix;
/// N x M radar template with (1/M) T T^H equal to the desired covariance.
using Template = CMatrix;
/// K x M desired user symbols.
using SymbolMatrix = CMatrix;
/// RIS reflection coefficients, one unit-modulus entry per element.
using PhaseShifts = CVector;

/// Bad configuration, malformed spec file or inconsistent shapes.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine hit a non-finite value or a factorization failure.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scalar problem parameters. Powers are linear (watts).
struct SystemConfig {
  int n_antennas = 16;  // N
  int n_users = 4;      // K
  int n_ris = 20;       // L, 0 means no RIS
  int frame_len = 20;   // M

  double total_power = 0.1;   // Pt, 20 dBm
  double noise_power = 1e-3;  // sigma^2
  double rho = 0.5;           // radar/communication weight
  double papr_limit = 2.0;    // eta
  double penalty = 1.0;       // ADMM mu

  int outer_iters = 100;
  int inner_iters = 30;
  int manifold_iters = 50;
  double outer_tol = 1e-5;
  double inner_tol = 1e-5;
  double manifold_tol = 1e-6;

  bool warm_start = true;
  std::uint64_t rng_seed = 1;

  /// Throws SpecError when an invariant does not hold.
  void validate() const;
};

struct ChannelSet {
  CMatrix h_bu;  // K x N, BS -> users
  CMatrix h_ru;  // K x L, RIS -> users
  CMatrix h_br;  // L x N, BS -> RIS

  int n_users() const { return static_cast<int>(h_bu.rows()); }
  int n_antennas() const { return static_cast<int>(h_bu.cols()); }
  int n_ris() const { return static_cast<int>(h_br.rows()); }
};

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

}  // namespace isac
