#pragma once

#include "qsp/chebyshev.hpp"
#include "qsp/optimizer.hpp"
#include "qsp/su2.hpp"

namespace qsp {

/// Complementary polynomials completing a real target f to a unitary pair:
/// P = f + i B, Q = i C with |P|^2 + (1-x^2)|Q|^2 = 1 on [-1, 1].
/// B shares f's parity, C has the opposite one.
struct ComplementarySet {
    ChebSeries real_target;
    ChebSeries imag_complement;
    ChebSeries q_complement;
};

/// Step 1 of the direct method: roots of 1 - f^2 via colleague-matrix
/// eigenvalues in the Chebyshev basis, classified and recombined into B and
/// C through a discrete Fourier transform on the unit circle.  Double
/// precision only; degree capped at 30.
ComplementarySet complementary_polynomials(const ChebSeries& f);

/// Step 2: Chebyshev-basis degree reduction.  P and Q are passed as
/// (real, imaginary) first-kind coefficient pairs; the terminal phase comes
/// from e^{i phi_0} = P(1).  Throws when the top coefficients of P and Q
/// disagree in magnitude beyond 1e-6 (the instability signature).
PhaseVector reduce_to_phases(const ChebSeries& p_re, const ChebSeries& p_im,
                             const ChebSeries& q_re, const ChebSeries& q_im);

/// Both steps composed; the report's max_node_error uses the same positive
/// Chebyshev nodes as the optimizer.
SolveReport gslw_solve(const ChebSeries& f);

}  // namespace qsp
