// SPDX-License-Identifier: Apache-2.0
#include "isac/radar.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isac {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

CMatrix steering_matrix(const AngleGrid& grid, int n_antennas) {
  CMatrix a(n_antennas, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a.col(static_cast<Eigen::Index>(i)) = steering_vector(grid.degrees[i], n_antennas);
  }
  return a;
}

// Real part of diag(A^H R A), i.e. a_i^H R a_i for every column a_i.
RVector quadratic_forms(const CMatrix& steering, const CMatrix& r) {
  return (steering.adjoint() * r * steering).diagonal().real();
}

struct MatchLoss {
  double value = 0.0;
  RVector residual;  // q - c * pattern
};

MatchLoss match_loss(const CMatrix& steering, const CMatrix& r, const RVector& pattern) {
  const RVector q = quadratic_forms(steering, r);
  const double pp = pattern.squaredNorm();
  const double scale = pp > 0.0 ? q.dot(pattern) / pp : 0.0;
  MatchLoss out;
  out.residual = q - scale * pattern;
  out.value = out.residual.squaredNorm();
  return out;
}

// PSD projection by eigenvalue clipping, then a diagonal congruence that puts
// every diagonal entry at `diag_value`. The congruence keeps the matrix PSD.
CMatrix project_feasible(const CMatrix& r, double diag_value) {
  const CMatrix herm = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const RVector lambda = eig.eigenvalues().cwiseMax(0.0);
  CMatrix psd = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().adjoint();

  const Eigen::Index n = psd.rows();
  RVector scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = psd(i, i).real();
    scale(i) = d > 1e-300 ? std::sqrt(diag_value / d) : 0.0;
  }
  CMatrix out = scale.asDiagonal() * psd * scale.asDiagonal();
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = diag_value;
  return 0.5 * (out + out.adjoint());
}

}  // namespace

AngleGrid AngleGrid::uniform(double step_deg) {
  if (!(step_deg > 0.0) || step_deg > 180.0) throw SpecError("angle grid step must lie in (0, 180]");
  AngleGrid g;
  g.step = step_deg;
  const auto n = static_cast<int>(std::floor(180.0 / step_deg + 1e-9));
  g.degrees.reserve(static_cast<std::size_t>(n) + 2);
  for (int i = 0; i <= n; ++i) g.degrees.push_back(-90.0 + i * step_deg);
  if (g.degrees.back() < 90.0 - 1e-9) g.degrees.push_back(90.0);
  g.degrees.back() = std::min(g.degrees.back(), 90.0);
  return g;
}

CVector steering_vector(double phi_deg, int n_antennas) {
  const double s = std::sin(phi_deg * kDeg);
  CVector a(n_antennas);
  for (int n = 0; n < n_antennas; ++n) a(n) = std::polar(1.0, std::numbers::pi * n * s);
  return a;
}

RVector beampattern(const CMatrix& covariance, const AngleGrid& grid) {
  return quadratic_forms(steering_matrix(grid, static_cast<int>(covariance.rows())), covariance);
}

RVector waveform_beampattern(const Waveform& x, const AngleGrid& grid) {
  const CMatrix r = (x * x.adjoint()) / static_cast<double>(x.cols());
  return beampattern(r, grid);
}

RVector desired_beampattern(std::span<const double> targets_deg, double beam_width_deg,
                            const AngleGrid& grid) {
  constexpr double kEdgeTol = 1e-9;
  const double half = 0.5 * beam_width_deg;
  RVector p = RVector::Zero(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (double t : targets_deg) {
      if (std::abs(grid.degrees[i] - t) <= half + kEdgeTol) {
        p(static_cast<Eigen::Index>(i)) = 1.0;
        break;
      }
    }
  }
  return p;
}

DesiredCovariance synthesize_desired_covariance(const RVector& pattern, const AngleGrid& grid,
                                                double total_power, int n_antennas,
                                                const CovarianceSynthesisOptions& opts) {
  if (pattern.size() != static_cast<Eigen::Index>(grid.size())) {
    throw SpecError("synthesize_desired_covariance: pattern and grid sizes differ");
  }
  if ((pattern.array() < 0.0).any()) {
    throw SpecError("synthesize_desired_covariance: pattern must be non-negative");
  }
  const double diag_value = total_power / n_antennas;
  const CMatrix steering = steering_matrix(grid, n_antennas);

  // Lipschitz bound of the gradient of sum_i (a_i^H R a_i)^2 is 2 sum_i ||a_i||^4.
  const double lipschitz =
      2.0 * static_cast<double>(grid.size()) * static_cast<double>(n_antennas) * n_antennas;
  double step = 1.0 / lipschitz;

  DesiredCovariance out;
  CMatrix r = CMatrix::Identity(n_antennas, n_antennas) * diag_value;
  MatchLoss current = match_loss(steering, r, pattern);
  out.loss_trace.push_back(current.value);

  for (int it = 0; it < opts.max_iters && current.value > 0.0; ++it) {
    const CMatrix grad = 2.0 * steering * current.residual.asDiagonal() * steering.adjoint();
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      CMatrix cand = project_feasible(r - step * grad, diag_value);
      MatchLoss trial = match_loss(steering, cand, pattern);
      if (trial.value < current.value) {
        const double rel = (current.value - trial.value) / current.value;
        r = std::move(cand);
        current = std::move(trial);
        out.loss_trace.push_back(current.value);
        accepted = true;
        step *= 2.0;
        if (rel < opts.rel_tol) it = opts.max_iters;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  out.r_d = r;
  out.ridge = cholesky_ridge(total_power);
  out.factor = cholesky_with_ridge(out.r_d, total_power);
  return out;
}

CMatrix cholesky_with_ridge(const CMatrix& r_d, double total_power) {
  if (r_d.rows() != r_d.cols()) throw SpecError("cholesky_with_ridge: matrix must be square");
  const CMatrix herm = 0.5 * (r_d + r_d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw SolverAbort("cholesky_with_ridge: eigen-decomposition failed");
  if (eig.eigenvalues().minCoeff() < -1e-6 * total_power) {
    throw SolverAbort("cholesky_with_ridge: covariance is not positive semidefinite");
  }
  const Eigen::Index n = herm.rows();
  const double ridge = cholesky_ridge(total_power);
  Eigen::LLT<CMatrix> llt(herm + ridge * CMatrix::Identity(n, n));
  if (llt.info() != Eigen::Success) {
    // Slightly indefinite input: clip to the PSD cone before adding the ridge.
    Eigen::SelfAdjointEigenSolver<CMatrix> full(herm);
    const RVector lambda = full.eigenvalues().cwiseMax(0.0);
    const CMatrix psd = full.eigenvectors() * lambda.asDiagonal() * full.eigenvectors().adjoint();
    llt.compute(psd + ridge * CMatrix::Identity(n, n));
    if (llt.info() != Eigen::Success) throw SolverAbort("cholesky_with_ridge: factorization failed");
  }
  return llt.matrixL();
}

}  // namespace isac
