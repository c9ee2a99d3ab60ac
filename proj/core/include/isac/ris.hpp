// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/types.hpp"

#include <vector>

namespace isac {

/// MUI power as a quadratic in the RIS coefficients:
///   ||H_eff(theta) X - S||^2 = theta^H Q theta + 2 Re(d^T theta) + const_term.
struct RisQuadratic {
  CMatrix q;  // B .* C^T, Hermitian PSD
  CVector d;  // diag(H_br X (H_bu X - S)^H H_ru)
  double const_term = 0.0;

  double value(const PhaseShifts& theta) const;
};

RisQuadratic build_ris_quadratic(const ChannelSet& ch, const Waveform& x, const SymbolMatrix& s);

/// Euclidean gradient 2 Q theta + 2 conj(d) projected onto the tangent space of
/// the complex circle manifold at theta.
CVector riemannian_gradient(const RisQuadratic& q, const PhaseShifts& theta);

/// Elementwise normalization of theta + step * xi. Entries whose sum is
/// shorter than 1e-14 keep their old value.
PhaseShifts retract(const PhaseShifts& theta, double step, const CVector& xi);

struct ThetaResult {
  PhaseShifts theta;
  std::vector<double> objective_trace;  // f(theta0), then one entry per accepted step
  int iterations = 0;
  bool converged = false;
};

/// Riemannian gradient descent with Armijo backtracking on |theta_l| = 1.
ThetaResult theta_update(const RisQuadratic& q, const PhaseShifts& theta0, int max_iters,
                         double tol);

}  // namespace isac
