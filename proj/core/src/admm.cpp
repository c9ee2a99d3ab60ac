// SPDX-License-Identifier: Apache-2.0
#include "isac/admm.hpp"

#include <algorithm>
#include <cmath>

namespace isac {

namespace {

// Complex matrix from a real 2NM vector in embed() layout, without the copy
// through unembed's argument checks.
CMatrix as_complex(const RVector& v, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::Index nm = rows * cols;
  CMatrix out(rows, cols);
  for (Eigen::Index k = 0; k < nm; ++k) out(k % rows, k / rows) = cplx(v(k), v(k + nm));
  return out;
}

bool all_finite(const RVector& v) { return v.allFinite(); }

}  // namespace

RVector embed(const CMatrix& x) {
  const Eigen::Index nm = x.size();
  RVector out(2 * nm);
  for (Eigen::Index k = 0; k < nm; ++k) {
    const cplx z = x(k % x.rows(), k / x.rows());
    out(k) = z.real();
    out(k + nm) = z.imag();
  }
  return out;
}

CMatrix unembed(const RVector& xr, int rows, int cols) {
  if (xr.size() != 2 * static_cast<Eigen::Index>(rows) * cols) {
    throw SpecError("unembed: vector length does not match 2 * rows * cols");
  }
  return as_complex(xr, rows, cols);
}

AdmmState AdmmState::from_waveform(const Waveform& x0) {
  AdmmState st;
  st.x = embed(x0);
  st.alpha = st.x;
  st.gamma = st.x;
  st.u = RVector::Zero(st.x.size());
  st.w = RVector::Zero(st.x.size());
  return st;
}

StackedSystem build_stacked(const CMatrix& h_eff, const SymbolMatrix& s, const Template& t,
                            double rho, double mu) {
  if (rho < 0.0 || rho > 1.0) throw SpecError("build_stacked: rho must lie in [0, 1]");
  if (!(mu > 0.0)) throw SolverAbort("build_stacked: penalty must be > 0");
  const Eigen::Index k = h_eff.rows();
  const Eigen::Index n = h_eff.cols();
  const Eigen::Index m = s.cols();
  if (s.rows() != k || t.rows() != n || t.cols() != m) {
    throw SpecError("build_stacked: shape mismatch between channel, symbols and template");
  }
  const double wc = std::sqrt(rho);
  const double wr = std::sqrt(1.0 - rho);

  StackedSystem sys;
  sys.mu = mu;
  sys.a.resize(k + n, n);
  sys.a.topRows(k) = wc * h_eff;
  sys.a.bottomRows(n) = wr * CMatrix::Identity(n, n);
  sys.b.resize(k + n, m);
  sys.b.topRows(k) = wc * s;
  sys.b.bottomRows(n) = wr * t;
  sys.a_h_b = sys.a.adjoint() * sys.b;
  sys.b_bar = embed(sys.b);

  const CMatrix gram = sys.a.adjoint() * sys.a + mu * CMatrix::Identity(n, n);
  sys.gram.compute(gram);
  if (sys.gram.info() != Eigen::Success) throw SolverAbort("build_stacked: factorization failed");
  return sys;
}

RVector x_update(const StackedSystem& sys, const AdmmState& st) {
  const Eigen::Index n = sys.a.cols();
  const Eigen::Index m = sys.b.cols();
  const double mu = sys.mu;
  // Real-embedded right-hand side terms that do not involve A.
  const RVector r = -st.u - st.w + mu * st.alpha + mu * st.gamma;
  const CMatrix rhs = 2.0 * sys.a_h_b + as_complex(r, n, m);
  // (2 A^H A + 2 mu I) x_m = rhs_m for every column m.
  const CMatrix x = 0.5 * sys.gram.solve(rhs);
  return embed(x);
}

RVector alpha_update(const RVector& x, const RVector& u, double mu, int frame_len,
                     double total_power, const RVector& previous) {
  const RVector dir = x + u / mu;
  const double norm = dir.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return previous;
  return (std::sqrt(frame_len * total_power) / norm) * dir;
}

RVector gamma_update(const RVector& x, const RVector& w, double mu, double total_power,
                     double papr_limit, int n_antennas) {
  if (!(mu > 0.0)) throw SolverAbort("gamma_update: penalty must be > 0");
  const double cap = total_power * papr_limit / n_antennas;
  const double radius = std::sqrt(cap);
  const Eigen::Index nm = x.size() / 2;
  RVector g = x + w / mu;
  for (Eigen::Index k = 0; k < nm; ++k) {
    const double re = g(k);
    const double im = g(k + nm);
    const double mag2 = re * re + im * im;
    if (mag2 > cap) {
      const double s = radius / std::sqrt(mag2);
      g(k) = s * re;
      g(k + nm) = s * im;
    }
  }
  return g;
}

Duals dual_update(const RVector& x, const RVector& alpha, const RVector& gamma, const RVector& u,
                  const RVector& w, double mu) {
  // Stacking every E_n x over n reproduces x in the embed() layout.
  return {u + mu * (x - alpha), w + mu * (x - gamma)};
}

double primal_residual(const AdmmState& st) {
  const double to_alpha = (st.x - st.alpha).norm();
  const Eigen::Index nm = st.x.size() / 2;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < nm; ++k) {
    const double dr = st.x(k) - st.gamma(k);
    const double di = st.x(k + nm) - st.gamma(k + nm);
    worst = std::max(worst, dr * dr + di * di);
  }
  return std::max(to_alpha, std::sqrt(worst));
}

InnerResult solve_inner(const StackedSystem& sys, AdmmState& st, const WaveformLimits& limits,
                        int max_iters, double tol) {
  const double mu = sys.mu;
  const double threshold = tol * std::sqrt(limits.energy());
  InnerResult out;
  for (int it = 0; it < max_iters; ++it) {
    st.x = x_update(sys, st);
    st.alpha = alpha_update(st.x, st.u, mu, limits.frame_len, limits.total_power, st.alpha);
    st.gamma = gamma_update(st.x, st.w, mu, limits.total_power, limits.papr_limit,
                            limits.n_antennas);
    Duals d = dual_update(st.x, st.alpha, st.gamma, st.u, st.w, mu);
    st.u = std::move(d.u);
    st.w = std::move(d.w);

    if (!all_finite(st.x) || !all_finite(st.u) || !all_finite(st.w)) {
      throw SolverAbort("solve_inner: non-finite ADMM iterate at iteration " + std::to_string(it));
    }
    const double res = primal_residual(st);
    st.residual_history.push_back(res);
    out.diagnostics.iterations = it + 1;
    out.diagnostics.final_residual = res;
    if (res < threshold) {
      out.diagnostics.converged = true;
      break;
    }
  }

  CMatrix x = unembed(st.x, sys.n_antennas(), sys.frame_len());
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw SolverAbort("solve_inner: degenerate waveform");
  x *= std::sqrt(limits.energy()) / norm;
  out.x = std::move(x);
  return out;
}

}  // namespace isac
