// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "isac/types.hpp"

namespace isac {

/// Nearest template to `x` (Frobenius) among all T with (1/M) T T^H = F F^H.
/// With U S V^H the thin SVD of F^H X, returns sqrt(M) F U V^H. Requires M >= N.
Template t_update(const Waveform& x, const CMatrix& factor);

/// Template seeded from the power-scaled minimum-norm precoder of H X = S.
Template t_initialize(const CMatrix& h_eff, const SymbolMatrix& s, const CMatrix& factor,
                      double total_power);

}  // namespace isac
