// SPDX-License-Identifier: Apache-2.0
#include "isac/config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace isac {
namespace {

constexpr ExperimentKind kAll[] = {ExperimentKind::PaprConvergence, ExperimentKind::SumRateVsSnr,
                                   ExperimentKind::Beampattern, ExperimentKind::MseVsRho};

void expect_same(const ExperimentSpec& a, const ExperimentSpec& b) {
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(describe(a.base), describe(b.base));
  EXPECT_EQ(a.sweep_variable, b.sweep_variable);
  EXPECT_EQ(a.sweep_values, b.sweep_values);
  EXPECT_EQ(a.n_trials, b.n_trials);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.targets_deg, b.targets_deg);
  EXPECT_EQ(a.beam_width_deg, b.beam_width_deg);
  EXPECT_EQ(a.grid_step_deg, b.grid_step_deg);
}

TEST(ExperimentKind, NamesRoundTrip) {
  for (ExperimentKind k : kAll) EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
  EXPECT_THROW(parse_experiment_kind("fig5"), SpecError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(10.0), "10");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-45.0), "-45");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
}

TEST(ParseKeyValues, CommentsAndWhitespace) {
  const KeyValues kv = parse_key_values("# header\n  a = 1  \n\nb=two # trailing\n");
  ASSERT_EQ(kv.size(), 2U);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"b", "two"}));
  EXPECT_THROW(parse_key_values("novalue\n"), SpecError);
  EXPECT_THROW(parse_key_values(" = 3\n"), SpecError);
}

TEST(DefaultSpec, MatchesFigureSetups) {
  const ExperimentSpec f2 = default_spec(ExperimentKind::PaprConvergence);
  EXPECT_EQ(f2.sweep_variable, "eta");
  EXPECT_EQ(f2.sweep_values, (std::vector<double>{1.5, 2.0, 3.0}));
  const ExperimentSpec f3 = default_spec(ExperimentKind::SumRateVsSnr);
  EXPECT_EQ(f3.sweep_values, (std::vector<double>{0, 5, 10, 15, 20, 25, 30}));
  EXPECT_EQ(f3.base.rho, 0.1);
  EXPECT_EQ(f3.base.papr_limit, 2.0);
  EXPECT_EQ(f3.n_trials, 50);
  const ExperimentSpec f4b = default_spec(ExperimentKind::MseVsRho);
  EXPECT_EQ(f4b.sweep_values.front(), 0.1);
  EXPECT_EQ(f4b.sweep_values.back(), 0.9);
  for (ExperimentKind k : kAll) {
    const ExperimentSpec s = default_spec(k);
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.base.n_antennas, 16);
    EXPECT_EQ(s.base.n_users, 4);
    EXPECT_EQ(s.base.n_ris, 20);
    EXPECT_EQ(s.base.frame_len, 20);
    EXPECT_NEAR(s.base.total_power, 0.1, 1e-15);
  }
}

TEST(ParseSpec, FormatRoundTrip) {
  for (ExperimentKind k : kAll) {
    ExperimentSpec s = default_spec(k);
    s.base.rng_seed = 77;
    s.base.noise_power = 1.0 / 7.0;
    expect_same(parse_spec(format_spec(s)), s);
  }
}

TEST(ParseSpec, AliasesAndUnits) {
  const ExperimentSpec s = parse_spec(
      "experiment = papr-convergence\n"
      "total_power_dbm = 30\n"
      "eta = 2.5\n"
      "sweep = eta\n"
      "sweep_values = 1.5, 4\n");
  EXPECT_NEAR(s.base.total_power, 1.0, 1e-12);
  EXPECT_EQ(s.base.papr_limit, 2.5);
  EXPECT_EQ(s.sweep_values, (std::vector<double>{1.5, 4.0}));
}

TEST(ParseSpec, RejectsInvalidInput) {
  const std::string head = "experiment = sumrate-vs-snr\nsweep = snr_db\nsweep_values = 0, 10\n";
  EXPECT_NO_THROW(parse_spec(head));
  EXPECT_THROW(parse_spec("sweep = snr_db\nsweep_values = 0\n"), SpecError);
  EXPECT_THROW(parse_spec(head + "n_antenas = 4\n"), SpecError);
  EXPECT_THROW(parse_spec(head + "n_users = four\n"), SpecError);
  EXPECT_THROW(parse_spec(head + "rho = 1.5\n"), SpecError);
  EXPECT_THROW(parse_spec(head + "trials = 0\n"), SpecError);
  EXPECT_THROW(parse_spec(head + "frame_len = 8\n"), SpecError);  // M < N
  EXPECT_THROW(parse_spec(head + "n_users = 40\n"), SpecError);   // K > N
  EXPECT_THROW(parse_spec(head + "papr_limit = 0.5\n"), SpecError);
  EXPECT_THROW(parse_spec(head + "targets = 100\n"), SpecError);
  EXPECT_THROW(parse_spec("experiment = sumrate-vs-snr\nsweep = rho\nsweep_values = 0.5\n"), SpecError);
  EXPECT_THROW(parse_spec("experiment = mse-vs-rho\nsweep = rho\nsweep_values = \n"), SpecError);
  EXPECT_THROW(parse_spec("experiment = mse-vs-rho\nsweep = rho\nsweep_values = 0.2, 1.3\n"), SpecError);
  EXPECT_THROW(parse_spec("experiment = papr-convergence\nsweep = eta\nsweep_values = 0.9\n"), SpecError);
}

TEST(LoadSpec, ReadsFileAndReportsMissing) {
  const auto path = std::filesystem::temp_directory_path() / "isac_test_config_spec.cfg";
  {
    std::ofstream out(path);
    out << format_spec(default_spec(ExperimentKind::Beampattern));
  }
  expect_same(load_spec(path), default_spec(ExperimentKind::Beampattern));
  std::filesystem::remove(path);
  EXPECT_THROW(load_spec(path), SpecError);
}

}  // namespace
}  // namespace isac
