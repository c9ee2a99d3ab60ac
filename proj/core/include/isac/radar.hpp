// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/types.hpp"

#include <span>
#include <vector>

namespace isac {

/// Uniform angle grid over [-90, 90] degrees, both endpoints included.
struct AngleGrid {
  std::vector<double> degrees;
  double step = 1.0;

  static AngleGrid uniform(double step_deg = 1.0);
  std::size_t size() const { return degrees.size(); }
};

/// Desired radar covariance and its lower-triangular factor, F F^H = R_d + ridge I.
struct DesiredCovariance {
  CMatrix r_d;
  CMatrix factor;
  double ridge = 0.0;
  /// Beampattern-matching loss per accepted synthesis iterate.
  std::vector<double> loss_trace;
};

/// Uniform linear array response [1, e^{j pi sin(phi)}, ..., e^{j pi (N-1) sin(phi)}].
CVector steering_vector(double phi_deg, int n_antennas);

/// a^H(phi) R a(phi) on every grid angle.
RVector beampattern(const CMatrix& covariance, const AngleGrid& grid);

/// Same, with R = (1/M) X X^H.
RVector waveform_beampattern(const Waveform& x, const AngleGrid& grid);

/// Rectangular ideal beams: 1 on [t - w/2, t + w/2] for every target t, 0 elsewhere.
RVector desired_beampattern(std::span<const double> targets_deg, double beam_width_deg,
                            const AngleGrid& grid);

struct CovarianceSynthesisOptions {
  int max_iters = 500;
  double rel_tol = 1e-6;
};

/// Least-squares beampattern matching over Hermitian PSD matrices with
/// diag(R) = Pt / N. The pattern scale is refit in closed form each step.
/// Projected gradient with backtracking; only loss-decreasing iterates are
/// accepted. Returns R_d together with its ridged Cholesky factor.
DesiredCovariance synthesize_desired_covariance(const RVector& pattern, const AngleGrid& grid,
                                                double total_power, int n_antennas,
                                                const CovarianceSynthesisOptions& opts = {});

/// Lower-triangular F with F F^H = R_d + (1e-10 Pt) I. Throws SolverAbort
/// when R_d has an eigenvalue below -1e-6 Pt.
CMatrix cholesky_with_ridge(const CMatrix& r_d, double total_power);

/// Ridge used by cholesky_with_ridge.
inline double cholesky_ridge(double total_power) { return 1e-10 * total_power; }

}  // namespace isac
