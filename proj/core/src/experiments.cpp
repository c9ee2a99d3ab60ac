// SPDX-License-Identifier: Apache-2.0
#include "isac/experiments.hpp"

#include "isac/model.hpp"
#include "isac/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace isac {

namespace {

constexpr std::uint64_t kTrialStream = 0x545249414cULL;  // "TRIAL"

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> spec_comments(const ExperimentSpec& spec) {
  std::vector<std::string> out;
  out.push_back("experiment=" + std::string(to_string(spec.kind)));
  for (const auto& [k, v] : describe(spec.base)) out.push_back(k + "=" + v);
  std::string sweep = "sweep=" + spec.sweep_variable + " values=";
  for (std::size_t i = 0; i < spec.sweep_values.size(); ++i) {
    if (i) sweep += ";";
    sweep += format_double(spec.sweep_values[i]);
  }
  out.push_back(sweep);
  out.push_back("trials=" + std::to_string(spec.n_trials));
  std::string targets = "targets_deg=";
  for (std::size_t i = 0; i < spec.targets_deg.size(); ++i) {
    if (i) targets += ";";
    targets += format_double(spec.targets_deg[i]);
  }
  out.push_back(targets);
  out.push_back("beam_width_deg=" + format_double(spec.beam_width_deg));
  out.push_back("grid_step_deg=" + format_double(spec.grid_step_deg));
  return out;
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << quote_if_needed(columns[i]);
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote_if_needed(row[i]);
    out << "\n";
  }
}

std::string CsvTable::str() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  Rng rng{base_seed, static_cast<std::uint64_t>(trial), kTrialStream};
  return rng.bits();
}

TrialInstance make_trial(const SystemConfig& base, int trial) {
  TrialInstance t;
  t.seed = trial_seed(base.rng_seed, trial);
  t.channels = generate_channels(base, t.seed);
  t.symbols = generate_symbols(base, t.seed);
  return t;
}

ChannelSet without_ris(const ChannelSet& ch) {
  ChannelSet out;
  out.h_bu = ch.h_bu;
  out.h_ru.resize(ch.h_bu.rows(), 0);
  out.h_br.resize(0, ch.h_bu.cols());
  return out;
}

SolveResult solve_trial(const SystemConfig& cfg, const TrialInstance& trial,
                        const DesiredCovariance& cov, bool with_ris) {
  SystemConfig c = cfg;
  c.rng_seed = trial.seed;
  if (with_ris) return solve(c, trial.channels, trial.symbols, cov);
  c.n_ris = 0;
  return solve(c, without_ris(trial.channels), trial.symbols, cov);
}

RadarSetup prepare_radar(const ExperimentSpec& spec) {
  RadarSetup r;
  r.grid = AngleGrid::uniform(spec.grid_step_deg);
  r.desired = desired_beampattern(spec.targets_deg, spec.beam_width_deg, r.grid);
  r.covariance = synthesize_desired_covariance(r.desired, r.grid, spec.base.total_power,
                                               spec.base.n_antennas);
  return r;
}

RVector normalize_beampattern(const RVector& pattern, const AngleGrid& grid, double total_power) {
  const double integral = pattern.sum() * grid.step * std::numbers::pi / 180.0;
  if (!(integral > 0.0)) return pattern;
  return pattern * (total_power / integral);
}

double beampattern_mse(const Waveform& x, const RadarSetup& radar, double total_power) {
  const RVector got = normalize_beampattern(waveform_beampattern(x, radar.grid), radar.grid, total_power);
  const RVector want = normalize_beampattern(radar.desired, radar.grid, total_power);
  return (got - want).squaredNorm() / static_cast<double>(got.size());
}

int iterations_to_band(const std::vector<double>& trace, double target, double rel_band) {
  const double band = rel_band * target;
  int first = -1;
  for (std::size_t i = trace.size(); i-- > 0;) {
    if (std::abs(trace[i] - target) > band) break;
    first = static_cast<int>(i) + 1;
  }
  return first;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

PaprConvergenceResult run_papr_convergence(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const RadarSetup radar = prepare_radar(spec);
  const int trials = spec.n_trials;
  const int n_eta = static_cast<int>(spec.sweep_values.size());

  PaprConvergenceResult out;
  out.traces.resize(static_cast<std::size_t>(n_eta * trials));
  parallel_for(n_eta * trials, threads, [&](int task) {
    const int e = task / trials;
    const int t = task % trials;
    SystemConfig cfg = spec.base;
    cfg.papr_limit = spec.sweep_values[static_cast<std::size_t>(e)];
    const TrialInstance inst = make_trial(spec.base, t);
    const SolveResult res = solve_trial(cfg, inst, radar.covariance, cfg.n_ris > 0);
    out.traces[static_cast<std::size_t>(task)] = {cfg.papr_limit, t, res.papr_trace};
  });
  return out;
}

SumRateResult run_sumrate_vs_snr(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const RadarSetup radar = prepare_radar(spec);
  const int trials = spec.n_trials;

  SumRateResult out;
  out.snr_db = spec.sweep_values;
  out.with_ris.assign(static_cast<std::size_t>(trials), {});
  out.without_ris.assign(static_cast<std::size_t>(trials), {});
  parallel_for(2 * trials, threads, [&](int task) {
    const int t = task / 2;
    const bool with_ris = (task % 2) == 0;
    const TrialInstance inst = make_trial(spec.base, t);
    const SolveResult res = solve_trial(spec.base, inst, radar.covariance, with_ris);
    const CMatrix h = with_ris ? effective_channel(inst.channels, res.theta) : inst.channels.h_bu;
    std::vector<double> rates;
    rates.reserve(out.snr_db.size());
    for (double snr : out.snr_db) {
      const double noise = spec.base.total_power / std::pow(10.0, snr / 10.0);
      rates.push_back(sum_rate(h, res.x, inst.symbols, noise));
    }
    (with_ris ? out.with_ris : out.without_ris)[static_cast<std::size_t>(t)] = std::move(rates);
  });
  return out;
}

BeampatternResult run_beampattern(const ExperimentSpec& spec, int threads) {
  spec.validate();
  BeampatternResult out;
  out.radar = prepare_radar(spec);
  const RadarSetup& radar = out.radar;
  const double pt = spec.base.total_power;
  const int trials = spec.n_trials;
  const auto g = static_cast<Eigen::Index>(radar.grid.size());

  std::vector<RVector> patterns(static_cast<std::size_t>(2 * trials));
  std::vector<double> mse(static_cast<std::size_t>(2 * trials));
  parallel_for(2 * trials, threads, [&](int task) {
    const int t = task / 2;
    const bool with_ris = (task % 2) == 0;
    const TrialInstance inst = make_trial(spec.base, t);
    const SolveResult res = solve_trial(spec.base, inst, radar.covariance, with_ris);
    patterns[static_cast<std::size_t>(task)] =
        normalize_beampattern(waveform_beampattern(res.x, radar.grid), radar.grid, pt);
    mse[static_cast<std::size_t>(task)] = beampattern_mse(res.x, radar, pt);
  });

  out.desired = normalize_beampattern(radar.desired, radar.grid, pt);
  out.with_ris = RVector::Zero(g);
  out.without_ris = RVector::Zero(g);
  for (int t = 0; t < trials; ++t) {
    out.with_ris += patterns[static_cast<std::size_t>(2 * t)] / trials;
    out.without_ris += patterns[static_cast<std::size_t>(2 * t + 1)] / trials;
    out.mse_with_ris.push_back(mse[static_cast<std::size_t>(2 * t)]);
    out.mse_without_ris.push_back(mse[static_cast<std::size_t>(2 * t + 1)]);
  }
  return out;
}

MseVsRhoResult run_mse_vs_rho(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const RadarSetup radar = prepare_radar(spec);
  const int trials = spec.n_trials;
  const int n_rho = static_cast<int>(spec.sweep_values.size());

  MseVsRhoResult out;
  out.rho = spec.sweep_values;
  out.with_ris.assign(static_cast<std::size_t>(n_rho), std::vector<double>(static_cast<std::size_t>(trials)));
  out.without_ris = out.with_ris;
  parallel_for(n_rho * trials * 2, threads, [&](int task) {
    const int r = task / (2 * trials);
    const int t = (task / 2) % trials;
    const bool with_ris = (task % 2) == 0;
    SystemConfig cfg = spec.base;
    cfg.rho = out.rho[static_cast<std::size_t>(r)];
    const TrialInstance inst = make_trial(spec.base, t);
    const SolveResult res = solve_trial(cfg, inst, radar.covariance, with_ris);
    auto& dst = with_ris ? out.with_ris : out.without_ris;
    dst[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] =
        beampattern_mse(res.x, radar, cfg.total_power);
  });
  return out;
}

CsvTable to_csv(const ExperimentSpec& spec, const PaprConvergenceResult& r) {
  CsvTable csv;
  csv.comments = spec_comments(spec);
  csv.columns = {"eta", "trial", "outer_iteration", "papr"};
  for (const auto& tr : r.traces) {
    for (std::size_t i = 0; i < tr.papr.size(); ++i) {
      csv.rows.push_back({format_double(tr.eta), std::to_string(tr.trial), std::to_string(i + 1),
                          format_double(tr.papr[i])});
    }
  }
  return csv;
}

CsvTable to_csv(const ExperimentSpec& spec, const SumRateResult& r) {
  CsvTable csv;
  csv.comments = spec_comments(spec);
  csv.columns = {"snr_db", "variant", "mean_sum_rate", "stderr"};
  for (std::size_t i = 0; i < r.snr_db.size(); ++i) {
    for (const auto& [name, data] : {std::pair{"with_ris", &r.with_ris}, std::pair{"without_ris", &r.without_ris}}) {
      std::vector<double> xs;
      for (const auto& trial : *data) xs.push_back(trial[i]);
      csv.rows.push_back({format_double(r.snr_db[i]), name, format_double(mean(xs)),
                          format_double(standard_error(xs))});
    }
  }
  return csv;
}

CsvTable to_csv(const ExperimentSpec& spec, const BeampatternResult& r) {
  CsvTable csv;
  csv.comments = spec_comments(spec);
  csv.comments.push_back("normalization=integral over grid (radians) equals total_power");
  csv.columns = {"angle_deg", "desired", "with_ris", "without_ris"};
  for (std::size_t i = 0; i < r.radar.grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    csv.rows.push_back({format_double(r.radar.grid.degrees[i]), format_double(r.desired(k)),
                        format_double(r.with_ris(k)), format_double(r.without_ris(k))});
  }
  return csv;
}

CsvTable to_csv(const ExperimentSpec& spec, const MseVsRhoResult& r) {
  CsvTable csv;
  csv.comments = spec_comments(spec);
  csv.columns = {"rho", "variant", "mean_mse_db"};
  for (std::size_t i = 0; i < r.rho.size(); ++i) {
    csv.rows.push_back({format_double(r.rho[i]), "with_ris", format_double(10.0 * std::log10(mean(r.with_ris[i])))});
    csv.rows.push_back({format_double(r.rho[i]), "without_ris", format_double(10.0 * std::log10(mean(r.without_ris[i])))});
  }
  return csv;
}

CsvTable run_experiment(const ExperimentSpec& spec, int threads) {
  switch (spec.kind) {
    case ExperimentKind::PaprConvergence: return to_csv(spec, run_papr_convergence(spec, threads));
    case ExperimentKind::SumRateVsSnr: return to_csv(spec, run_sumrate_vs_snr(spec, threads));
    case ExperimentKind::Beampattern: return to_csv(spec, run_beampattern(spec, threads));
    case ExperimentKind::MseVsRho: return to_csv(spec, run_mse_vs_rho(spec, threads));
  }
  throw SpecError("run_experiment: unknown experiment kind");
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace isac
