#include "qsp/padding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsp {

namespace {
constexpr double kQuarter = std::numbers::pi / 4.0;
}  // namespace

PaddedPhases pad_phases(const PhaseVector& phi, int l) {
    if (!phi.is_symmetric()) throw std::invalid_argument("padding: phases must be symmetric");
    if (l < 0) throw std::invalid_argument("padding: negative pad width");
    if (l == 0) return {phi, 0};

    const int d = phi.degree();
    PhaseVector out;
    out.phases.assign(d + 1 + 2 * l, 0.0);
    out[0] = kQuarter;
    out.phases.back() = kQuarter;
    for (int i = 0; i <= d; ++i) out[l + i] = phi[i];
    out[l] -= kQuarter;
    out[l + d] -= kQuarter;
    return {out, l};
}

ChebSeries g_phi_series(const PhaseVector& phi) {
    if (!phi.is_symmetric()) throw std::invalid_argument("padding: phases must be symmetric");
    const int dprime = static_cast<int>(phi.size());
    if (dprime < 1) throw std::invalid_argument("padding: empty phase vector");

    // Both end offsets apply; for a length-1 vector the single entry is first
    // and last at once, picking up pi/2.
    std::vector<double> tilde(phi.phases);
    tilde.front() -= kQuarter;
    tilde.back() -= kQuarter;

    double cos_prod = 1.0;
    for (double t : tilde) cos_prod *= std::cos(t);

    ChebSeries out;
    out.coeffs.assign(dprime, 0.0);  // degree dprime - 1
    if (dprime % 2 == 0) {
        const int d = dprime / 2 - 1;
        for (int j = 0; j <= d; ++j) {
            out.coeffs[2 * d + 1 - 2 * j] = -cos_prod * 2.0 * std::tan(tilde[j]);
        }
        out.parity = Parity::odd;
    } else {
        const int d = (dprime - 1) / 2;
        out.coeffs[0] = -cos_prod * std::tan(tilde[d]);
        for (int j = 0; j < d; ++j) {
            out.coeffs[2 * d - 2 * j] = -cos_prod * 2.0 * std::tan(tilde[j]);
        }
        out.parity = Parity::even;
    }
    return out;
}

PhaseVector decay_estimate_phases(const ChebSeries& target) {
    if (target.parity == Parity::none) {
        throw std::invalid_argument("padding: target needs a definite parity");
    }
    // Stated degree from the series length (trailing zeros permitted),
    // snapped down into the tagged parity class.
    int deg = static_cast<int>(target.coeffs.size()) - 1;
    if (deg >= 0 && parity_of_degree(deg) != target.parity) --deg;
    if (deg < 0) throw std::invalid_argument("padding: target too short for its parity");
    const int dprime = deg + 1;

    auto coeff = [&](int idx) {
        return idx < static_cast<int>(target.coeffs.size()) ? target.coeffs[idx] : 0.0;
    };

    PhaseVector out;
    out.phases.assign(dprime, 0.0);
    if (dprime % 2 == 0) {
        const int d = dprime / 2 - 1;
        for (int j = 0; j <= d; ++j) {
            const double t = -std::atan(coeff(2 * d + 1 - 2 * j) / 2.0);
            out[j] = t;
            out[dprime - 1 - j] = t;
        }
    } else {
        const int d = (dprime - 1) / 2;
        out[d] = -std::atan(coeff(0));
        for (int j = 0; j < d; ++j) {
            const double t = -std::atan(coeff(2 * d - 2 * j) / 2.0);
            out[j] = t;
            out[dprime - 1 - j] = t;
        }
    }
    out[0] += kQuarter;
    out.phases.back() += kQuarter;
    return out;
}

ReducedPhases padded_warm_start(const SolveReport& previous, const ChebSeries& new_target) {
    if (new_target.parity == Parity::none) {
        throw std::invalid_argument("padding: target needs a definite parity");
    }
    const int new_degree = new_target.degree();
    const int old_degree = previous.target_degree;
    const int gap = new_degree - old_degree;
    if (gap < 0 || gap % 2 != 0 || parity_of_degree(new_degree) != parity_of_degree(old_degree)) {
        throw std::invalid_argument("padding: warm start needs a nonnegative even degree gap");
    }
    return reduce_symmetric(pad_phases(previous.phases, gap / 2).phases);
}

}  // namespace qsp
