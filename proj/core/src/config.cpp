// SPDX-License-Identifier: Apache-2.0
#include "isac/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace isac {

namespace {

std::string trim(std::string_view s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw SpecError("spec: '" + key + "' expects a finite number, got '" + v + "'");
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SpecError("spec: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const long long x = parse_integer(key, v);
  if (x < -1000000000LL || x > 1000000000LL) throw SpecError("spec: '" + key + "' out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw SpecError("spec: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::PaprConvergence: return "papr-convergence";
    case ExperimentKind::SumRateVsSnr: return "sumrate-vs-snr";
    case ExperimentKind::Beampattern: return "beampattern";
    case ExperimentKind::MseVsRho: return "mse-vs-rho";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::PaprConvergence, ExperimentKind::SumRateVsSnr,
                 ExperimentKind::Beampattern, ExperimentKind::MseVsRho}) {
    if (to_string(k) == name) return k;
  }
  throw SpecError("spec: unknown experiment '" + std::string(name) + "'");
}

std::string_view expected_sweep(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::PaprConvergence: return "eta";
    case ExperimentKind::SumRateVsSnr: return "snr_db";
    case ExperimentKind::Beampattern: return "";
    case ExperimentKind::MseVsRho: return "rho";
  }
  return "";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw SpecError("format_double: conversion failed");
  return std::string(buf, ptr);
}

void ExperimentSpec::validate() const {
  base.validate();
  if (n_trials < 1) throw SpecError("spec: trials must be >= 1");
  if (sweep_variable != expected_sweep(kind)) {
    throw SpecError("spec: experiment '" + std::string(to_string(kind)) + "' sweeps '" +
                    std::string(expected_sweep(kind)) + "', not '" + sweep_variable + "'");
  }
  if (kind != ExperimentKind::Beampattern && sweep_values.empty()) {
    throw SpecError("spec: sweep_values must not be empty");
  }
  for (double v : sweep_values) {
    if (!std::isfinite(v)) throw SpecError("spec: sweep values must be finite");
    if (sweep_variable == "rho" && (v < 0.0 || v > 1.0)) throw SpecError("spec: rho sweep outside [0, 1]");
    if (sweep_variable == "eta" &&
        (v < 1.0 || v > static_cast<double>(base.n_antennas) * base.frame_len)) {
      throw SpecError("spec: eta sweep outside [1, N*M]");
    }
  }
  if (!(beam_width_deg >= 0.0)) throw SpecError("spec: beam_width must be >= 0");
  if (!(grid_step_deg > 0.0 && grid_step_deg <= 180.0)) throw SpecError("spec: grid_step must lie in (0, 180]");
  for (double t : targets_deg) {
    if (!(t >= -90.0 && t <= 90.0)) throw SpecError("spec: targets must lie in [-90, 90] degrees");
  }
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw SpecError("spec line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw SpecError("spec line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

ExperimentSpec parse_spec(std::string_view text) {
  const KeyValues kv = parse_key_values(text);
  auto kind_it = std::find_if(kv.begin(), kv.end(), [](const auto& p) { return p.first == "experiment"; });
  if (kind_it == kv.end()) throw SpecError("spec: missing 'experiment' key");
  ExperimentSpec spec = default_spec(parse_experiment_kind(kind_it->second));
  SystemConfig& c = spec.base;

  for (const auto& [key, value] : kv) {
    if (key == "experiment") continue;
    else if (key == "n_antennas") c.n_antennas = parse_int(key, value);
    else if (key == "n_users") c.n_users = parse_int(key, value);
    else if (key == "n_ris") c.n_ris = parse_int(key, value);
    else if (key == "frame_len") c.frame_len = parse_int(key, value);
    else if (key == "total_power") c.total_power = parse_double(key, value);
    else if (key == "total_power_dbm") c.total_power = dbm_to_watts(parse_double(key, value));
    else if (key == "noise_power") c.noise_power = parse_double(key, value);
    else if (key == "rho") c.rho = parse_double(key, value);
    else if (key == "papr_limit" || key == "eta") c.papr_limit = parse_double(key, value);
    else if (key == "penalty") c.penalty = parse_double(key, value);
    else if (key == "outer_iters") c.outer_iters = parse_int(key, value);
    else if (key == "inner_iters") c.inner_iters = parse_int(key, value);
    else if (key == "manifold_iters") c.manifold_iters = parse_int(key, value);
    else if (key == "outer_tol") c.outer_tol = parse_double(key, value);
    else if (key == "inner_tol") c.inner_tol = parse_double(key, value);
    else if (key == "manifold_tol") c.manifold_tol = parse_double(key, value);
    else if (key == "warm_start") c.warm_start = parse_bool(key, value);
    else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw SpecError("spec: seed must be non-negative");
      c.rng_seed = static_cast<std::uint64_t>(s);
    }
    else if (key == "sweep") spec.sweep_variable = value;
    else if (key == "sweep_values") spec.sweep_values = parse_list(key, value);
    else if (key == "trials") spec.n_trials = parse_int(key, value);
    else if (key == "output") spec.output = value;
    else if (key == "targets") spec.targets_deg = parse_list(key, value);
    else if (key == "beam_width") spec.beam_width_deg = parse_double(key, value);
    else if (key == "grid_step") spec.grid_step_deg = parse_double(key, value);
    else throw SpecError("spec: unknown key '" + key + "'");
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("spec: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

KeyValues describe(const SystemConfig& c) {
  return {
      {"n_antennas", std::to_string(c.n_antennas)},
      {"n_users", std::to_string(c.n_users)},
      {"n_ris", std::to_string(c.n_ris)},
      {"frame_len", std::to_string(c.frame_len)},
      {"total_power", format_double(c.total_power)},
      {"noise_power", format_double(c.noise_power)},
      {"rho", format_double(c.rho)},
      {"papr_limit", format_double(c.papr_limit)},
      {"penalty", format_double(c.penalty)},
      {"outer_iters", std::to_string(c.outer_iters)},
      {"inner_iters", std::to_string(c.inner_iters)},
      {"manifold_iters", std::to_string(c.manifold_iters)},
      {"outer_tol", format_double(c.outer_tol)},
      {"inner_tol", format_double(c.inner_tol)},
      {"manifold_tol", format_double(c.manifold_tol)},
      {"warm_start", c.warm_start ? "true" : "false"},
      {"seed", std::to_string(c.rng_seed)},
  };
}

std::string format_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "experiment = " << to_string(spec.kind) << "\n";
  for (const auto& [k, v] : describe(spec.base)) out << k << " = " << v << "\n";
  out << "sweep = " << spec.sweep_variable << "\n";
  out << "sweep_values = " << join(spec.sweep_values) << "\n";
  out << "trials = " << spec.n_trials << "\n";
  out << "output = " << spec.output << "\n";
  out << "targets = " << join(spec.targets_deg) << "\n";
  out << "beam_width = " << format_double(spec.beam_width_deg) << "\n";
  out << "grid_step = " << format_double(spec.grid_step_deg) << "\n";
  return out.str();
}

ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  s.base.total_power = dbm_to_watts(20.0);
  s.sweep_variable = std::string(expected_sweep(kind));
  switch (kind) {
    case ExperimentKind::PaprConvergence:
      s.sweep_values = {1.5, 2.0, 3.0};
      s.n_trials = 5;
      s.base.rho = 0.5;
      s.output = "fig2_papr_convergence.csv";
      break;
    case ExperimentKind::SumRateVsSnr:
      s.sweep_values = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
      s.n_trials = 50;
      s.base.rho = 0.1;
      s.base.papr_limit = 2.0;
      s.output = "fig3_sumrate_vs_snr.csv";
      break;
    case ExperimentKind::Beampattern:
      s.n_trials = 50;
      s.base.rho = 0.1;
      s.base.papr_limit = 2.0;
      s.output = "fig4a_beampattern.csv";
      break;
    case ExperimentKind::MseVsRho:
      s.sweep_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      s.n_trials = 50;
      s.base.papr_limit = 2.0;
      s.output = "fig4b_mse_vs_rho.csv";
      break;
  }
  return s;
}

}  // namespace isac
