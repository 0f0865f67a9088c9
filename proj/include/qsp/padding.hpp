#pragma once

#include "qsp/chebyshev.hpp"
#include "qsp/optimizer.hpp"
#include "qsp/su2.hpp"

namespace qsp {

/// A symmetric phase vector extended by l entries per side without changing
/// the encoded real component.
struct PaddedPhases {
    PhaseVector phases;
    int pad_width = 0;
};

/// (pi/4, 0^{l-1}, phi_0 - pi/4, phi_1, ..., phi_{d-1}, phi_d - pi/4,
///  0^{l-1}, pi/4).  l = 0 is the identity.  Requires symmetric input; the
/// real component of the result equals that of the input at every x.
PaddedPhases pad_phases(const PhaseVector& phi, int l);

/// Truncated small-angle expansion of the real component of a symmetric
/// phase vector: with tilde(phi)_j = phi_j - pi/4 at both ends,
///   g_Phi = -prod_j cos(tilde(phi)_j) * { sum_j 2 tan(tilde(phi)_j) T_{2d+1-2j}   (even length)
///                                       { tan(tilde(phi)_center) + sum 2 tan(.) T_{2d-2j}  (odd length)
/// Accurate to third order in ||tilde(Phi)||_1.
ChebSeries g_phi_series(const PhaseVector& phi);

/// Inverts the small-angle map: tilde(phi)_j = -atan(c_assoc(j)/2) with the
/// mirrored coefficient association (the center entry uses -atan(c_0)
/// unhalved for odd lengths), then pi/4 added at both ends.  An initial
/// guess, not an exact solve.
PhaseVector decay_estimate_phases(const ChebSeries& target);

/// reduce(pad(previous phases, l')) where 2l' is the degree increase.
/// Requires the degree gap to be a nonnegative even number (same parity).
ReducedPhases padded_warm_start(const SolveReport& previous, const ChebSeries& new_target);

}  // namespace qsp
