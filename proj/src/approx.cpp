#include "qsp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsp {

namespace {

// Rescale threshold for the backward recurrence; values are renormalized at
// the end, so only ratios matter.
constexpr double kRescaleLimit = 1e250;
constexpr double kRescaleFactor = 1e-250;

}  // namespace

std::vector<double> bessel_j_array(int k_max, double tau) {
    if (k_max < 0 || k_max > 50000) throw std::invalid_argument("bessel_j: order out of range");
    if (!(tau >= 0.0) || tau > 50000.0) throw std::invalid_argument("bessel_j: argument out of range");

    std::vector<double> out(k_max + 1, 0.0);
    if (tau == 0.0) {
        out[0] = 1.0;
        return out;
    }

    // Miller's backward recurrence: start far enough above both the request
    // and the turning point m ~ tau that the seed error has died out, then
    // normalize with J_0 + 2 sum_{m even} J_m = 1.
    const int start = std::max(k_max, static_cast<int>(std::ceil(1.4 * tau))) + 44;
    std::vector<int> rescales_at(k_max + 1, 0);
    int rescales = 0;

    double jp = 0.0;    // J_{m+1}
    double jc = 1e-30;  // J_m seed
    double norm = (start % 2 == 0) ? 2.0 * jc : 0.0;
    for (int m = start; m >= 1; --m) {
        const double jm = (2.0 * m / tau) * jc - jp;
        jp = jc;
        jc = jm;
        const int idx = m - 1;
        if (!std::isfinite(jc)) throw std::overflow_error("bessel_j: recurrence overflow");
        if (std::abs(jc) > kRescaleLimit) {
            jc *= kRescaleFactor;
            jp *= kRescaleFactor;
            norm *= kRescaleFactor;
            ++rescales;
        }
        if (idx <= k_max) {
            out[idx] = jc;
            rescales_at[idx] = rescales;
        }
        if (idx == 0) {
            norm += jc;
        } else if (idx % 2 == 0) {
            norm += 2.0 * jc;
        }
    }
    if (!std::isfinite(norm) || norm == 0.0) throw std::overflow_error("bessel_j: normalization failed");
    for (int i = 0; i <= k_max; ++i) {
        out[i] /= norm;
        const int behind = rescales - rescales_at[i];
        if (behind > 0) out[i] *= std::pow(kRescaleFactor, behind);
    }
    return out;
}

double bessel_j(int k, double tau) { return bessel_j_array(k, tau)[k]; }

JacobiAngerParts jacobi_anger(double tau, double eps0) {
    if (!(tau > 0.0)) throw std::invalid_argument("jacobi_anger: tau must be positive");
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("jacobi_anger: eps0 must be in (0, 1)");

    const int d = static_cast<int>(std::ceil(1.4 * tau + std::log(1.0 / eps0)));
    const std::vector<double> j = bessel_j_array(d, tau);

    JacobiAngerParts parts;
    parts.degree = d;
    parts.even_part.coeffs.assign(d + 1, 0.0);
    parts.odd_part.coeffs.assign(d + 1, 0.0);
    parts.even_part.parity = Parity::even;
    parts.odd_part.parity = Parity::odd;

    parts.even_part.coeffs[0] = j[0];
    for (int k = 2; k <= d; k += 2) {
        const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
        parts.even_part.coeffs[k] = 2.0 * sign * j[k];
    }
    // Im e^{-i tau x} = -sin(tau x) = -2 sum_{k odd} (-1)^{(k-1)/2} J_k T_k.
    for (int k = 1; k <= d; k += 2) {
        const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        parts.odd_part.coeffs[k] = -2.0 * sign * j[k];
    }
    return parts;
}

ChebSeries eigenstate_filter(int k, double delta) {
    if (k < 1) throw std::invalid_argument("eigenstate_filter: k must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("eigenstate_filter: delta in (0, 1)");

    const double shift = 2.0 / (1.0 - delta * delta);
    const double y0 = -1.0 - shift * delta * delta;
    const double denom = chebyshev_t(k, y0);
    auto filter = [=](double x) {
        const double y = -1.0 + shift * (x * x - delta * delta);
        return chebyshev_t(k, y) / denom;
    };
    const int d = 2 * k;
    return coeffs_from_function(filter, d, default_quadrature_points(d), Parity::even);
}

ChebSeries inverse_truncation_series(long b, long d) {
    if (b < 1 || d < 0 || d > b) throw std::invalid_argument("inverse_truncation: bad b, d");

    // PS_j = 2^{-2b} sum_{i=j+1}^{b} C(2b, b+i).  The binomials are carried
    // as ratios to the central one in extended precision and normalized by
    // the exact row sum 2^{2b}, which keeps the coefficients accurate to a
    // few ulps even for b ~ 1e5.
    std::vector<long double> t(b + 1);
    t[0] = 1.0L;
    for (long i = 0; i < b; ++i) {
        t[i + 1] = t[i] * static_cast<long double>(b - i) / static_cast<long double>(b + i + 1);
    }
    long double total = t[0];
    for (long i = 1; i <= b; ++i) total += 2.0L * t[i];

    std::vector<double> partial(d + 1, 0.0);
    long double acc = 0.0L;
    for (long i = b; i >= 1; --i) {
        acc += t[i];
        if (i - 1 <= d) partial[i - 1] = static_cast<double>(acc / total);
    }

    ChebSeries out;
    out.coeffs.assign(2 * d + 2, 0.0);
    for (long jj = 0; jj <= d; ++jj) {
        const double sign = (jj % 2 == 0) ? 1.0 : -1.0;
        out.coeffs[2 * jj + 1] = 4.0 * sign * partial[jj];
    }
    out.parity = Parity::odd;
    return out;
}

ChebSeries inverse_truncation(double kappa, double eps0) {
    if (!(kappa >= 2.0)) throw std::invalid_argument("inverse_truncation: kappa must be >= 2");
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("inverse_truncation: eps0 in (0, 1)");

    const long b = static_cast<long>(std::ceil(kappa * kappa * std::log(kappa / eps0)));
    const long d = static_cast<long>(std::floor(std::sqrt(b * std::log(4.0 * b / eps0))));
    return inverse_truncation_series(b, d);
}

ChebSeries scale_series(const ChebSeries& series, double divisor) {
    if (!(divisor > 0.0)) throw std::invalid_argument("scale_series: divisor must be positive");
    ChebSeries out = series;
    for (double& c : out.coeffs) c /= divisor;
    out.scale_divisor = series.scale_divisor * divisor;
    return out;
}

}  // namespace qsp
