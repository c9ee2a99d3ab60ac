// SPDX-License-Identifier: Apache-2.0
#include "isac/procrustes.hpp"

#include "isac/model.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace isac {

Template t_update(const Waveform& x, const CMatrix& factor) {
  const Eigen::Index n = factor.rows();
  const Eigen::Index m = x.cols();
  if (factor.cols() != n || x.rows() != n) throw SpecError("t_update: shape mismatch");
  if (m < n) throw SpecError("t_update: frame length must be >= number of antennas");
  if (!x.allFinite() || !factor.allFinite()) throw SolverAbort("t_update: non-finite input");

  const CMatrix core = factor.adjoint() * x;  // N x M
  Eigen::JacobiSVD<CMatrix> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw SolverAbort("t_update: SVD failed");
  // Thin V is M x N, so U V^H already keeps only the first N rows of V^H.
  return std::sqrt(static_cast<double>(m)) * factor * svd.matrixU() * svd.matrixV().adjoint();
}

Template t_initialize(const CMatrix& h_eff, const SymbolMatrix& s, const CMatrix& factor,
                      double total_power) {
  return t_update(least_squares_precoder(h_eff, s, total_power), factor);
}

}  // namespace isac
