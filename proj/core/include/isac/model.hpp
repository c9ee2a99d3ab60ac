// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/types.hpp"

#include <cstdint>

namespace isac {

/// Draws H_bu, H_ru, H_br with i.i.d. CN(0, 1) entries. Deterministic in `seed`.
ChannelSet generate_channels(const SystemConfig& cfg, std::uint64_t seed);

/// K x M matrix of uniform QPSK symbols (+-1 +-j)/sqrt(2).
SymbolMatrix generate_symbols(const SystemConfig& cfg, std::uint64_t seed);

/// i.i.d. uniform phases on the unit circle.
PhaseShifts random_phases(int n, std::uint64_t seed);

/// H_bu + H_ru diag(theta) H_br.
CMatrix effective_channel(const ChannelSet& ch, const PhaseShifts& theta);

/// ||H X - S||_F^2.
double mui_power(const CMatrix& h_eff, const Waveform& x, const SymbolMatrix& s);

/// Per-user SINR 1 / (MUI_k + sigma^2) with MUI_k the frame-averaged
/// interference power, summed as log2(1 + SINR_k).
double sum_rate(const CMatrix& h_eff, const Waveform& x, const SymbolMatrix& s,
                double noise_power);

/// Peak sample power over mean sample power of vec(X).
double papr(const Waveform& x);

/// Minimum-norm solution of H X = S rescaled to ||X||^2 = M * Pt.
Waveform least_squares_precoder(const CMatrix& h_eff, const SymbolMatrix& s,
                                double total_power);

}  // namespace isac
