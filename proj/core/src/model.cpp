// SPDX-License-Identifier: Apache-2.0
#include "isac/model.hpp"

#include "isac/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace isac {

namespace {

constexpr std::uint64_t kChannelStream = 0x43484e4cULL;  // "CHNL"
constexpr std::uint64_t kSymbolStream = 0x53594d42ULL;   // "SYMB"
constexpr std::uint64_t kPhaseStream = 0x50484153ULL;    // "PHAS"

CMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian();
  }
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SpecError(what);
}

}  // namespace

void SystemConfig::validate() const {
  require(n_users >= 1, "n_users must be >= 1");
  require(n_antennas >= n_users, "n_antennas must be >= n_users");
  require(n_ris >= 0, "n_ris must be >= 0");
  require(frame_len >= 1, "frame_len must be >= 1");
  require(frame_len >= n_antennas, "frame_len must be >= n_antennas for the template update");
  require(std::isfinite(total_power) && total_power > 0.0, "total_power must be > 0");
  require(std::isfinite(noise_power) && noise_power > 0.0, "noise_power must be > 0");
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(papr_limit >= 1.0 &&
              papr_limit <= static_cast<double>(n_antennas) * static_cast<double>(frame_len),
          "papr_limit must lie in [1, N*M]");
  require(std::isfinite(penalty) && penalty > 0.0, "penalty must be > 0");
  require(outer_iters >= 1 && inner_iters >= 1 && manifold_iters >= 0,
          "iteration caps must be positive");
  require(outer_tol >= 0.0 && inner_tol >= 0.0 && manifold_tol >= 0.0,
          "tolerances must be non-negative");
}

ChannelSet generate_channels(const SystemConfig& cfg, std::uint64_t seed) {
  Rng rng{seed, kChannelStream};
  ChannelSet ch;
  ch.h_bu = gaussian_matrix(rng, cfg.n_users, cfg.n_antennas);
  ch.h_ru = gaussian_matrix(rng, cfg.n_users, cfg.n_ris);
  ch.h_br = gaussian_matrix(rng, cfg.n_ris, cfg.n_antennas);
  return ch;
}

SymbolMatrix generate_symbols(const SystemConfig& cfg, std::uint64_t seed) {
  Rng rng{seed, kSymbolStream};
  const double a = std::numbers::sqrt2 / 2.0;
  SymbolMatrix s(cfg.n_users, cfg.frame_len);
  for (int j = 0; j < s.cols(); ++j) {
    for (int i = 0; i < s.rows(); ++i) {
      const std::uint64_t b = rng.bits() >> 62;  // two top bits pick the point
      s(i, j) = cplx((b & 1U) ? -a : a, (b & 2U) ? -a : a);
    }
  }
  return s;
}

PhaseShifts random_phases(int n, std::uint64_t seed) {
  Rng rng{seed, kPhaseStream};
  PhaseShifts theta(n);
  for (int l = 0; l < n; ++l) theta(l) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  return theta;
}

CMatrix effective_channel(const ChannelSet& ch, const PhaseShifts& theta) {
  if (theta.size() != ch.h_ru.cols() || theta.size() != ch.h_br.rows()) {
    throw SpecError("effective_channel: phase vector length does not match the RIS channels");
  }
  if (theta.size() == 0) return ch.h_bu;
  return ch.h_bu + ch.h_ru * theta.asDiagonal() * ch.h_br;
}

double mui_power(const CMatrix& h_eff, const Waveform& x, const SymbolMatrix& s) {
  if (h_eff.cols() != x.rows() || h_eff.rows() != s.rows() || x.cols() != s.cols()) {
    throw SpecError("mui_power: shape mismatch");
  }
  return (h_eff * x - s).squaredNorm();
}

double sum_rate(const CMatrix& h_eff, const Waveform& x, const SymbolMatrix& s,
                double noise_power) {
  if (!(noise_power > 0.0)) throw SpecError("sum_rate: noise power must be > 0");
  if (h_eff.cols() != x.rows() || h_eff.rows() != s.rows() || x.cols() != s.cols()) {
    throw SpecError("sum_rate: shape mismatch");
  }
  const CMatrix err = h_eff * x - s;
  const double m = static_cast<double>(x.cols());
  double rate = 0.0;
  for (int k = 0; k < err.rows(); ++k) {
    const double mui_k = err.row(k).squaredNorm() / m;
    rate += std::log2(1.0 + 1.0 / (mui_k + noise_power));
  }
  return rate;
}

double papr(const Waveform& x) {
  const double energy = x.squaredNorm();
  if (!(energy > 0.0)) throw SpecError("papr: waveform is all zero");
  const double peak = x.cwiseAbs2().maxCoeff();
  return peak / (energy / static_cast<double>(x.size()));
}

Waveform least_squares_precoder(const CMatrix& h_eff, const SymbolMatrix& s,
                                double total_power) {
  Waveform x = h_eff.completeOrthogonalDecomposition().solve(s);
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw SolverAbort("least_squares_precoder: degenerate least-squares solution");
  }
  x *= std::sqrt(static_cast<double>(s.cols()) * total_power) / norm;
  return x;
}

}  // namespace isac
