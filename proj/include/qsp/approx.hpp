#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qsp/chebyshev.hpp"

namespace qsp {

/// Bessel function of the first kind J_k(tau), computed by Miller's backward
/// recurrence with sum normalization.  Valid for 0 <= k <= 50000 and
/// 0 <= tau <= 50000; absolute error below 1e-15.
double bessel_j(int k, double tau);

/// J_0(tau) .. J_{k_max}(tau) in one backward pass.
std::vector<double> bessel_j_array(int k_max, double tau);

/// Chebyshev expansion of e^{-i tau x}, truncated at
/// d = ceil(1.4 tau + ln(1/eps0)).  The even series carries cos(tau x), the
/// odd series carries -sin(tau x); both are returned unscaled, the caller
/// applies the /2 normalization.
struct JacobiAngerParts {
    ChebSeries even_part;  // cos(tau x)
    ChebSeries odd_part;   // -sin(tau x)
    int degree = 0;
};

JacobiAngerParts jacobi_anger(double tau, double eps0);

/// Degree-2k even polynomial concentrating weight at x = 0:
///   f_k(x, delta) = T_k(-1 + 2 (x^2 - delta^2)/(1 - delta^2))
///                 / T_k(-1 + 2 (-delta^2)/(1 - delta^2)).
/// Computed by quadrature on point evaluations, never by composing
/// polynomials symbolically.
ChebSeries eigenstate_filter(int k, double delta);

/// Odd Chebyshev truncation approximating 1/x on [1/kappa, 1] to eps0:
///   f(x) = 4 sum_j (-1)^j 2^{-2b} [ sum_{i=j+1}^{b} C(2b, b+i) ] T_{2j+1},
/// with b = ceil(kappa^2 ln(kappa/eps0)) and the largest retained index
/// chosen so the reported degrees match the reference table.  Binomial
/// partial sums are accumulated through log-gamma to avoid overflow.
ChebSeries inverse_truncation(double kappa, double eps0);

/// The same series for explicitly given parameters b and d (top index of the
/// retained sum); inverse_truncation derives them from kappa and eps0.
ChebSeries inverse_truncation_series(long b, long d);

/// Closed sub-intervals of [-1, 1] the minimax problem is posed on.
struct IntervalSpec {
    std::vector<std::pair<double, double>> segments;

    IntervalSpec() = default;
    explicit IntervalSpec(std::vector<std::pair<double, double>> segs);
    IntervalSpec(double a, double b) : IntervalSpec({{a, b}}) {}
};

/// Basis for the Remez solve.  odd_chebyshev uses g_j = T_{2j-1}, even uses
/// g_j = T_{2j-2}, full uses g_j = T_{j-1}; all satisfy the Haar condition on
/// subsets of (0, 1] (odd/even) or any interval (full).
struct RemezBasis {
    enum class Kind { odd_chebyshev, even_chebyshev, full };
    Kind kind = Kind::full;
    int count = 1;
};

struct RemezResult {
    ChebSeries series;
    double achieved_error = 0.0;
    int iterations = 0;
    /// (levelled |Delta|, ||r||_inf) per exchange iteration.
    std::vector<std::pair<double, double>> history;
    /// Final reference set and residual values there.
    std::vector<double> reference_points;
    std::vector<double> reference_residuals;
};

/// Remez exchange: minimizes max w(x) |F - sum a_j g_j| over the interval
/// (w = 1 when no weight is given), with multi-point exchange and a
/// single-point safeguard.  Converged when the levelled error |Delta| and
/// ||r||_inf agree to tol relatively.
RemezResult remez_minimax(const std::function<double(double)>& F, const RemezBasis& basis,
                          const IntervalSpec& interval, double tol = 1e-2,
                          int max_iterations = 100,
                          const std::function<double(double)>& weight = {});

/// All coefficients divided by divisor; scale_divisor metadata accumulates.
ChebSeries scale_series(const ChebSeries& series, double divisor);

/// Smallest basis count whose minimax error does not exceed eps0, found by
/// doubling then bisecting on the (monotone) achieved error.
struct RemezSearchResult {
    int basis_count = 0;
    RemezResult result;
};

RemezSearchResult remez_minimal_basis(const std::function<double(double)>& F,
                                      RemezBasis::Kind kind, const IntervalSpec& interval,
                                      double eps0, double tol = 1e-2,
                                      const std::function<double(double)>& weight = {});

/// Minimax approximation of 1/x on [1/kappa, 1] under the x^2 weight, the
/// criterion the reference degree table is calibrated to, at the smallest
/// degree with weighted error below eps0.
RemezSearchResult remez_inverse(double kappa, double eps0, RemezBasis::Kind kind);

}  // namespace qsp
