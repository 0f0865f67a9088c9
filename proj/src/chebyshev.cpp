#include "qsp/chebyshev.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsp {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        default: return "none";
    }
}

Parity parity_from_string(const std::string& s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    if (s == "none") return Parity::none;
    throw std::invalid_argument("qsp: unknown parity '" + s + "'");
}

Parity parity_of_degree(int degree) {
    return (degree % 2 == 0) ? Parity::even : Parity::odd;
}

int ChebSeries::degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] != 0.0) return static_cast<int>(i);
    }
    return -1;
}

ChebSeries with_parity(ChebSeries series, Parity parity) {
    if (parity == Parity::none) {
        series.parity = Parity::none;
        return series;
    }
    double cmax = 0.0;
    for (double c : series.coeffs) cmax = std::max(cmax, std::abs(c));
    const int keep = (parity == Parity::even) ? 0 : 1;
    for (std::size_t j = 0; j < series.coeffs.size(); ++j) {
        if (static_cast<int>(j % 2) == keep) continue;
        if (std::abs(series.coeffs[j]) > 1e-12 * cmax) {
            throw std::invalid_argument("qsp: series is not of the claimed parity");
        }
        series.coeffs[j] = 0.0;
    }
    series.parity = parity;
    return series;
}

NodeSet chebyshev_nodes(int dtilde) {
    if (dtilde < 1) throw std::invalid_argument("qsp: node count must be positive");
    NodeSet nodes;
    nodes.points.resize(dtilde);
    for (int j = 1; j <= dtilde; ++j) {
        nodes.points[j - 1] = std::cos((2.0 * j - 1.0) * kPi / (4.0 * dtilde));
    }
    return nodes;
}

double clenshaw_eval(const ChebSeries& series, double x) {
    if (x > 1.0 + 1e-14 || x < -1.0 - 1e-14) {
        throw std::domain_error("qsp: clenshaw_eval outside [-1, 1]");
    }
    x = std::clamp(x, -1.0, 1.0);
    const auto& c = series.coeffs;
    if (c.empty()) return 0.0;
    double b1 = 0.0, b2 = 0.0;
    const double two_x = 2.0 * x;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = c[j] + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + x * b1 - b2;
}

double chebyshev_t(int k, double y) {
    if (y >= -1.0 && y <= 1.0) return std::cos(k * std::acos(y));
    if (y > 1.0) return std::cosh(k * std::acosh(y));
    const double v = std::cosh(k * std::acosh(-y));
    return (k % 2 == 0) ? v : -v;
}

int default_quadrature_points(int degree) {
    return std::max(2 * (degree + 1), 128);
}

ChebSeries coeffs_from_function(const std::function<double(double)>& F, int degree, int K,
                                Parity claimed) {
    if (degree < 0) throw std::invalid_argument("qsp: negative degree");
    if (K < degree + 1) throw std::invalid_argument("qsp: quadrature needs K >= degree + 1");

    const int n = 2 * K;
    std::vector<std::complex<double>> samples(n);
    for (int l = 0; l < n; ++l) {
        const double theta = kPi * l / K;
        samples[l] = F(-std::cos(theta));
    }
    // The quadrature wants hat g_j = sum_l g_l e^{+i j theta_l}; the forward
    // transform computes the conjugate sum, and g is real.
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum(n);
    fft.fwd(spectrum, samples);

    ChebSeries out;
    out.coeffs.resize(degree + 1);
    for (int j = 0; j <= degree; ++j) {
        const double factor = (j == 0 ? 1.0 : 2.0) / n;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        out.coeffs[j] = factor * sign * spectrum[j].real();
    }
    if (claimed != Parity::none) out = with_parity(std::move(out), claimed);
    return out;
}

ChebSeries coeffs_of_qsp(const PhaseVector& phi) {
    const int d = phi.degree();
    const int n = d + 1;  // full root set of T_{d+1}
    std::vector<double> theta(n), fvals(n);
    for (int j = 0; j < n; ++j) {
        theta[j] = (2.0 * j + 1.0) * kPi / (2.0 * n);
        fvals[j] = real_component(phi, std::cos(theta[j]));
    }
    ChebSeries out;
    out.coeffs.resize(n);
    for (int m = 0; m <= d; ++m) {
        // T_m(x_j) = cos(m theta_j); discrete orthogonality over the d+1 nodes
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += fvals[j] * std::cos(m * theta[j]);
        out.coeffs[m] = acc * (m == 0 ? 1.0 : 2.0) / n;
    }
    return out;
}

double coefficient_gap(const ChebSeries& a, const ChebSeries& b) {
    const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    double gap = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double av = j < a.coeffs.size() ? a.coeffs[j] : 0.0;
        const double bv = j < b.coeffs.size() ? b.coeffs[j] : 0.0;
        gap = std::max(gap, std::abs(av - bv));
    }
    return gap;
}

double grid_max_abs(const ChebSeries& series, int grid_points) {
    double m = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double x = -1.0 + 2.0 * i / (grid_points - 1.0);
        m = std::max(m, std::abs(clenshaw_eval(series, x)));
    }
    return m;
}

}  // namespace qsp
