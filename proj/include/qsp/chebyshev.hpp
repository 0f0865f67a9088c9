#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsp/su2.hpp"

namespace qsp {

enum class Parity { even, odd, none };

const char* to_string(Parity p);
Parity parity_from_string(const std::string& s);
Parity parity_of_degree(int degree);

/// First-kind Chebyshev series c_0 T_0 + ... + c_d T_d with a parity tag.
/// When a parity is claimed, the opposite-parity coefficients are exactly
/// zero (enforced by snapping at construction sites).  scale_divisor
/// accumulates divisors applied by scale_series so callers can un-scale
/// downstream results.
struct ChebSeries {
    std::vector<double> coeffs;
    Parity parity = Parity::none;
    double scale_divisor = 1.0;

    ChebSeries() = default;
    ChebSeries(std::vector<double> c, Parity p = Parity::none)
        : coeffs(std::move(c)), parity(p) {}

    /// Index of the last nonzero coefficient (trailing zeros permitted);
    /// -1 for the all-zero series.
    int degree() const;
};

/// Snap opposite-parity coefficients below 1e-16 * max|c| to exact zero and
/// tag the series.  Throws if a claimed-parity coefficient is materially
/// nonzero.
ChebSeries with_parity(ChebSeries series, Parity parity);

/// Positive roots of T_{2*dtilde}, strictly decreasing:
/// x_j = cos((2j-1) pi / (4 dtilde)), j = 1..dtilde.
struct NodeSet {
    std::vector<double> points;
    std::size_t count() const { return points.size(); }
};

NodeSet chebyshev_nodes(int dtilde);

/// Backward-recurrence (Clenshaw) evaluation; no monomial expansion occurs.
double clenshaw_eval(const ChebSeries& series, double x);

/// Single T_k(y), valid for any real y (cosh continuation outside [-1, 1]).
double chebyshev_t(int k, double y);

/// Chebyshev coefficients c_0..c_degree of F via the 2K-point quadrature
///   c_j ~= (2 - delta_{j0}) / (2K) * (-1)^j * sum_l F(-cos th_l) e^{i j th_l},
/// th_l = pi l / K, evaluated through a length-2K discrete Fourier transform.
/// Requires K >= degree + 1.
ChebSeries coeffs_from_function(const std::function<double(double)>& F, int degree, int K,
                                Parity claimed = Parity::none);

/// Default quadrature size for a degree-d expansion.
int default_quadrature_points(int degree);

/// Chebyshev coefficients of f_Phi = Re<0|U_Phi|0>, recovered by sampling at
/// the full set of d+1 roots of T_{d+1} and inverting the sums by discrete
/// orthogonality.
ChebSeries coeffs_of_qsp(const PhaseVector& phi);

/// max_j |a_j - b_j| over the union of index ranges, missing indices read
/// as zero.
double coefficient_gap(const ChebSeries& a, const ChebSeries& b);

/// max |f| over a uniform grid on [-1, 1] including both endpoints.
double grid_max_abs(const ChebSeries& series, int grid_points = 10001);

}  // namespace qsp
