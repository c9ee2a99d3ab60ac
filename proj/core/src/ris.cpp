// SPDX-License-Identifier: Apache-2.0
#include "isac/ris.hpp"

#include <cmath>
#include <string>

namespace isac {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr int kMaxBacktracks = 60;

}  // namespace

double RisQuadratic::value(const PhaseShifts& theta) const {
  if (theta.size() == 0) return const_term;
  const double quad = theta.dot(q * theta).real();  // dot() conjugates the left operand
  const double lin = 2.0 * (d.transpose() * theta).value().real();
  return quad + lin + const_term;
}

RisQuadratic build_ris_quadratic(const ChannelSet& ch, const Waveform& x, const SymbolMatrix& s) {
  if (x.rows() != ch.h_bu.cols() || s.rows() != ch.h_bu.rows() || s.cols() != x.cols()) {
    throw SpecError("build_ris_quadratic: shape mismatch");
  }
  const CMatrix direct_err = ch.h_bu * x - s;  // K x M
  const CMatrix reflected = ch.h_br * x;       // L x M

  RisQuadratic out;
  const CMatrix b = ch.h_ru.adjoint() * ch.h_ru;
  const CMatrix c = reflected * reflected.adjoint();
  out.q = b.cwiseProduct(c.transpose());
  out.q = 0.5 * (out.q + out.q.adjoint());
  // diag(H_br X E^H H_ru) without forming the L x L product.
  const CMatrix left = reflected * direct_err.adjoint();  // L x K
  out.d.resize(ch.n_ris());
  for (int l = 0; l < ch.n_ris(); ++l) out.d(l) = (left.row(l) * ch.h_ru.col(l)).value();
  out.const_term = direct_err.squaredNorm();
  return out;
}

CVector riemannian_gradient(const RisQuadratic& q, const PhaseShifts& theta) {
  const CVector g = 2.0 * (q.q * theta) + 2.0 * q.d.conjugate();
  const Eigen::VectorXd radial = (g.array() * theta.array().conjugate()).real();
  return g - (radial.cast<cplx>().array() * theta.array()).matrix();
}

PhaseShifts retract(const PhaseShifts& theta, double step, const CVector& xi) {
  PhaseShifts out(theta.size());
  for (Eigen::Index l = 0; l < theta.size(); ++l) {
    const cplx z = theta(l) + step * xi(l);
    const double r = std::abs(z);
    out(l) = r < 1e-14 ? theta(l) : z / r;
  }
  return out;
}

ThetaResult theta_update(const RisQuadratic& q, const PhaseShifts& theta0, int max_iters,
                         double tol) {
  ThetaResult out;
  out.theta = theta0;
  double f = q.value(out.theta);
  if (!std::isfinite(f)) throw SolverAbort("theta_update: non-finite objective at the start point");
  out.objective_trace.push_back(f);

  const double stop = tol * (1.0 + std::abs(f));
  const double step0 = 1.0 / (2.0 * q.q.norm() + 1e-12);

  for (int it = 0; it < max_iters; ++it) {
    const CVector r = riemannian_gradient(q, out.theta);
    const double r2 = r.squaredNorm();
    if (std::sqrt(r2) < stop) {
      out.converged = true;
      break;
    }
    double step = step0;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      PhaseShifts cand = retract(out.theta, -step, r);
      const double fc = q.value(cand);
      if (!std::isfinite(fc)) {
        throw SolverAbort("theta_update: non-finite objective at iteration " + std::to_string(it));
      }
      if (fc <= f - kArmijo * step * r2) {
        out.theta = std::move(cand);
        f = fc;
        accepted = true;
        break;
      }
      step *= kShrink;
    }
    if (!accepted) break;
    out.objective_trace.push_back(f);
    out.iterations = it + 1;
  }
  return out;
}

}  // namespace isac
