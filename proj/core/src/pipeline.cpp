// SPDX-License-Identifier: Apache-2.0
#include "isac/pipeline.hpp"

#include "isac/admm.hpp"
#include "isac/model.hpp"
#include "isac/procrustes.hpp"
#include "isac/ris.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace isac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct BlockTimes {
  double waveform = 0.0;
  double templ = 0.0;
  double phase = 0.0;
};

SolveResult run(const SystemConfig& cfg, const ChannelSet& ch, const SymbolMatrix& s,
                const DesiredCovariance& cov, bool check_convergence, BlockTimes* times) {
  cfg.validate();
  if (ch.n_antennas() != cfg.n_antennas || ch.n_users() != cfg.n_users ||
      ch.n_ris() != cfg.n_ris || ch.h_ru.cols() != cfg.n_ris || ch.h_br.cols() != cfg.n_antennas) {
    throw SpecError("solve: channel dimensions do not match the configuration");
  }
  if (s.rows() != cfg.n_users || s.cols() != cfg.frame_len) {
    throw SpecError("solve: symbol matrix must be K x M");
  }
  if (cov.factor.rows() != cfg.n_antennas || cov.factor.cols() != cfg.n_antennas) {
    throw SpecError("solve: covariance factor must be N x N");
  }

  const WaveformLimits limits{cfg.total_power, cfg.papr_limit, cfg.n_antennas, cfg.frame_len};

  SolveResult res;
  res.theta = random_phases(cfg.n_ris, cfg.rng_seed);
  CMatrix h = effective_channel(ch, res.theta);
  res.x = least_squares_precoder(h, s, cfg.total_power);
  res.t = t_update(res.x, cov.factor);
  res.initial_objective = objective(cfg, h, res.x, res.t, s);

  AdmmState st = AdmmState::from_waveform(res.x);
  double prev = res.initial_objective;

  for (int it = 0; it < cfg.outer_iters; ++it) {
    auto t0 = Clock::now();
    const StackedSystem sys = build_stacked(h, s, res.t, cfg.rho, cfg.penalty);
    InnerResult inner = solve_inner(sys, st, limits, cfg.inner_iters, cfg.inner_tol);
    res.x = std::move(inner.x);
    res.inner_iterations += inner.diagnostics.iterations;
    if (times) times->waveform += seconds_since(t0);
    res.after_x.push_back(objective(cfg, h, res.x, res.t, s));

    t0 = Clock::now();
    Template t_new = t_update(res.x, cov.factor);
    const double obj_t = objective(cfg, h, res.x, t_new, s);
    if (obj_t <= res.after_x.back()) {
      res.t = std::move(t_new);
      res.after_t.push_back(obj_t);
    } else {
      res.after_t.push_back(res.after_x.back());
    }
    if (times) times->templ += seconds_since(t0);

    double obj = res.after_t.back();
    if (cfg.n_ris > 0) {
      t0 = Clock::now();
      const RisQuadratic q = build_ris_quadratic(ch, res.x, s);
      PhaseShifts theta_new = theta_update(q, res.theta, cfg.manifold_iters, cfg.manifold_tol).theta;
      CMatrix h_new = effective_channel(ch, theta_new);
      const double obj_theta = objective(cfg, h_new, res.x, res.t, s);
      if (obj_theta <= obj) {
        res.theta = std::move(theta_new);
        h = std::move(h_new);
        obj = obj_theta;
      }
      ++res.theta_update_calls;
      if (times) times->phase += seconds_since(t0);
    }
    if (!std::isfinite(obj)) throw SolverAbort("solve: non-finite objective");
    res.after_theta.push_back(obj);

    res.objective_trace.push_back(obj);
    res.papr_trace.push_back(papr(res.x));
    res.mui_trace.push_back(mui_power(h, res.x, s));
    res.iterations_used = it + 1;

    if (!cfg.warm_start) st = AdmmState::from_waveform(res.x);

    const double denom = std::max(std::abs(prev), std::numeric_limits<double>::min());
    if (check_convergence && std::abs(obj - prev) / denom < cfg.outer_tol) {
      res.converged = true;
      break;
    }
    prev = obj;
  }
  return res;
}

}  // namespace

double objective(const SystemConfig& cfg, const CMatrix& h_eff, const Waveform& x,
                 const Template& t, const SymbolMatrix& s) {
  return cfg.rho * (h_eff * x - s).squaredNorm() + (1.0 - cfg.rho) * (x - t).squaredNorm();
}

SolveResult solve(const SystemConfig& cfg, const ChannelSet& ch, const SymbolMatrix& s,
                  const DesiredCovariance& cov) {
  return run(cfg, ch, s, cov, true, nullptr);
}

std::vector<ComplexityRow> complexity_probe(const std::vector<SystemConfig>& configs,
                                            int outer_iterations) {
  std::vector<ComplexityRow> rows;
  rows.reserve(configs.size());
  for (SystemConfig cfg : configs) {
    cfg.outer_iters = outer_iterations;
    cfg.validate();
    const ChannelSet ch = generate_channels(cfg, cfg.rng_seed);
    const SymbolMatrix s = generate_symbols(cfg, cfg.rng_seed);
    const AngleGrid grid = AngleGrid::uniform(1.0);
    const double targets[] = {-45.0, 0.0, 45.0};
    const DesiredCovariance cov = synthesize_desired_covariance(
        desired_beampattern(targets, 10.0, grid), grid, cfg.total_power, cfg.n_antennas);

    BlockTimes times;
    const auto t0 = Clock::now();
    const SolveResult res = run(cfg, ch, s, cov, false, &times);
    const double total = seconds_since(t0);

    const double iters = static_cast<double>(res.iterations_used);
    rows.push_back({cfg.n_antennas, cfg.n_users, cfg.n_ris, cfg.frame_len, res.iterations_used,
                    total / iters, times.waveform / iters, times.templ / iters,
                    times.phase / iters});
  }
  return rows;
}

}  // namespace isac
