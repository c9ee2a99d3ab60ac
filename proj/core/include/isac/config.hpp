// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace isac {

enum class ExperimentKind { PaprConvergence, SumRateVsSnr, Beampattern, MseVsRho };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

/// One experiment: base problem, the swept variable and the trial budget.
///
/// Spec files are flat `key = value` text with `#` comments. Lists are comma
/// separated. Unknown keys are rejected so typos do not silently fall back
/// to defaults.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::PaprConvergence;
  SystemConfig base;
  std::string sweep_variable;  // eta | snr_db | rho, empty for beampattern
  std::vector<double> sweep_values;
  int n_trials = 5;
  std::string output = "out.csv";

  std::vector<double> targets_deg{-45.0, 0.0, 45.0};
  double beam_width_deg = 10.0;
  double grid_step_deg = 1.0;

  /// Throws SpecError on any violated invariant.
  void validate() const;
};

/// Sweep variable each experiment kind expects ("" for beampattern).
std::string_view expected_sweep(ExperimentKind kind);

/// Ordered key/value pairs of a parsed spec file.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::string_view text);

ExperimentSpec parse_spec(std::string_view text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Canonical spec-file text; parse_spec(format_spec(s)) reproduces s.
std::string format_spec(const ExperimentSpec& spec);

/// Defaults for the four figure reproductions.
ExperimentSpec default_spec(ExperimentKind kind);

/// Every SystemConfig field as `key=value`, in a fixed order.
KeyValues describe(const SystemConfig& cfg);

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace isac
