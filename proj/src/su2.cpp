#include "qsp/su2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDomainSlack = 1e-14;

// Clamp |x| <= 1 within the documented slack; Chebyshev nodes computed via
// cosine can overshoot the interval by a few ulps.
double clamp_domain(double x) {
    if (x > 1.0) {
        if (x > 1.0 + kDomainSlack) throw std::domain_error("qsp: |x| > 1");
        return 1.0;
    }
    if (x < -1.0) {
        if (x < -1.0 - kDomainSlack) throw std::domain_error("qsp: |x| > 1");
        return -1.0;
    }
    return x;
}

inline Su2Matrix zrot(double phi) {
    const complexd e{std::cos(phi), std::sin(phi)};
    return {e, 0.0, 0.0, std::conj(e)};
}

// W(x) e^{i phi sigma_z} with every entry formed in one multiplication.
inline Su2Matrix w_zrot(double x, double s, double phi) {
    const double c = std::cos(phi), sn = std::sin(phi);
    return {complexd{x * c, x * sn}, complexd{s * sn, s * c}, complexd{-s * sn, s * c},
            complexd{x * c, -x * sn}};
}

double wrap_angle(double phi) {
    phi = std::remainder(phi, 2.0 * kPi);  // (-pi, pi]
    if (phi >= kPi) phi -= 2.0 * kPi;
    return phi;
}

}  // namespace

double Su2Matrix::unitarity_defect() const {
    // U^dagger U entries
    const complexd g00 = std::conj(m00) * m00 + std::conj(m10) * m10;
    const complexd g01 = std::conj(m00) * m01 + std::conj(m10) * m11;
    const complexd g10 = std::conj(m01) * m00 + std::conj(m11) * m10;
    const complexd g11 = std::conj(m01) * m01 + std::conj(m11) * m11;
    double defect = std::abs(g00 - 1.0);
    defect = std::max(defect, std::abs(g01));
    defect = std::max(defect, std::abs(g10));
    defect = std::max(defect, std::abs(g11 - 1.0));
    return defect;
}

bool PhaseVector::is_symmetric(double tol) const {
    const std::size_t n = phases.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        if (std::abs(phases[i] - phases[n - 1 - i]) > tol) return false;
    }
    return true;
}

PhaseVector canonicalized(const PhaseVector& phi) {
    PhaseVector out = phi;
    for (double& p : out.phases) p = wrap_angle(p);
    return out;
}

Su2Matrix wx_matrix(double x) {
    x = clamp_domain(x);
    const double s = std::sqrt(1.0 - x * x);
    return {complexd{x, 0.0}, complexd{0.0, s}, complexd{0.0, s}, complexd{x, 0.0}};
}

namespace {

// Compensated (double-double) scalars for the long product accumulator.
// A plain double cannot represent each factor unitary to better than half
// an ulp of its norm, and those representation ulps drift coherently across
// tens of thousands of identical-x factors; carrying the product in
// error-free transformed doubles keeps the result faithful to the ideal
// product at full working precision.
struct Dd {
    double hi = 0.0, lo = 0.0;
};

inline Dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd dd_norm(double hi, double lo) {
    const double s = hi + lo;
    return {s, lo - (s - hi)};
}

inline Dd dd_add(const Dd& a, const Dd& b) {
    const Dd s = two_sum(a.hi, b.hi);
    return dd_norm(s.hi, s.lo + a.lo + b.lo);
}

inline Dd dd_sub(const Dd& a, const Dd& b) { return dd_add(a, {-b.hi, -b.lo}); }

inline Dd dd_mul(const Dd& a, const Dd& b) {
    const Dd p = two_prod(a.hi, b.hi);
    return dd_norm(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

// Pauli coefficients of a special unitary: U = a0 I + i(az sz + ax sx + ay sy).
struct PauliQuad {
    Dd a0, az, ax, ay;
};

inline PauliQuad pmul(const PauliQuad& a, const PauliQuad& b) {
    PauliQuad c;
    c.a0 = dd_sub(dd_mul(a.a0, b.a0),
                  dd_add(dd_mul(a.az, b.az), dd_add(dd_mul(a.ax, b.ax), dd_mul(a.ay, b.ay))));
    c.az = dd_sub(dd_add(dd_mul(a.a0, b.az), dd_mul(b.a0, a.az)),
                  dd_sub(dd_mul(a.ax, b.ay), dd_mul(a.ay, b.ax)));
    c.ax = dd_sub(dd_add(dd_mul(a.a0, b.ax), dd_mul(b.a0, a.ax)),
                  dd_sub(dd_mul(a.ay, b.az), dd_mul(a.az, b.ay)));
    c.ay = dd_sub(dd_add(dd_mul(a.a0, b.ay), dd_mul(b.a0, a.ay)),
                  dd_sub(dd_mul(a.az, b.ax), dd_mul(a.ax, b.az)));
    return c;
}

// sqrt(1 - x^2) as a double-double so the W factors carry their norm to
// well below an ulp.
inline Dd dd_sqrt_one_minus_sq(double x) {
    const Dd xsq = two_prod(x, x);
    const Dd v = dd_add({1.0, 0.0}, {-xsq.hi, -xsq.lo});
    const double s0 = std::sqrt(v.hi);
    if (s0 == 0.0) return {0.0, 0.0};
    const Dd r = dd_sub(v, two_prod(s0, s0));
    return dd_norm(s0, r.hi / (2.0 * s0));
}

}  // namespace

Su2Matrix qsp_unitary(const PhaseVector& phi, double x) {
    if (phi.size() == 0) throw std::invalid_argument("qsp: empty phase vector");
    x = clamp_domain(x);
    const Dd xd{x, 0.0};
    const Dd sd = dd_sqrt_one_minus_sq(x);

    PauliQuad acc{{std::cos(phi[0]), 0.0}, {std::sin(phi[0]), 0.0}, {}, {}};
    for (std::size_t j = 1; j < phi.size(); ++j) {
        const Dd c{std::cos(phi[j]), 0.0}, sn{std::sin(phi[j]), 0.0};
        // W(x) e^{i phi sigma_z} = (x cos, x sin, s cos, s sin).
        const PauliQuad f{dd_mul(xd, c), dd_mul(xd, sn), dd_mul(sd, c), dd_mul(sd, sn)};
        acc = pmul(acc, f);
    }
    return {complexd{acc.a0.hi, acc.az.hi}, complexd{acc.ay.hi, acc.ax.hi},
            complexd{-acc.ay.hi, acc.ax.hi}, complexd{acc.a0.hi, -acc.az.hi}};
}

double real_component(const PhaseVector& phi, double x) {
    if (phi.size() == 0) throw std::invalid_argument("qsp: empty phase vector");
    x = clamp_domain(x);
    const double s = std::sqrt(1.0 - x * x);
    const complexd is{0.0, s};
    // Track the first row only: (v0, v1) <- (v0, v1) * W * zrot(phi_j).
    complexd e{std::cos(phi[0]), std::sin(phi[0])};
    complexd v0 = e, v1 = 0.0;
    for (std::size_t j = 1; j < phi.size(); ++j) {
        const complexd w0 = v0 * x + v1 * is;
        const complexd w1 = v0 * is + v1 * x;
        e = complexd{std::cos(phi[j]), std::sin(phi[j])};
        v0 = w0 * e;
        v1 = w1 * std::conj(e);
    }
    return v0.real();
}

double value_and_gradient(const PhaseVector& phi, double x, std::span<double> grad,
                          GradientWorkspace& ws) {
    const std::size_t n = phi.size();
    if (n == 0) throw std::invalid_argument("qsp: empty phase vector");
    if (grad.size() != n) throw std::invalid_argument("qsp: gradient span size mismatch");

    const double xc = clamp_domain(x);
    const double s = std::sqrt(1.0 - xc * xc);
    auto& prefix = ws.prefix;
    prefix.resize(n);
    prefix[0] = zrot(phi[0]);
    for (std::size_t j = 1; j < n; ++j) prefix[j] = prefix[j - 1] * w_zrot(xc, s, phi[j]);

    // dU/dphi_j = P_j (i sigma_z) S_j, hence
    // df/dphi_j = -Im[P_j(0,0) S_j(0,0) - P_j(0,1) S_j(1,0)].
    Su2Matrix suffix;  // identity
    for (std::size_t j = n; j-- > 0;) {
        const Su2Matrix& p = prefix[j];
        grad[j] = -(p.m00 * suffix.m00 - p.m01 * suffix.m10).imag();
        if (j > 0) suffix = w_zrot(xc, s, phi[j]) * suffix;
    }
    return prefix[n - 1].m00.real();
}

double value_and_gradient(const PhaseVector& phi, double x, std::span<double> grad) {
    GradientWorkspace ws;
    return value_and_gradient(phi, x, grad, ws);
}

PhaseVector negate_phases(const PhaseVector& phi) {
    if (phi.size() < 2) throw std::invalid_argument("qsp: negate_phases needs length >= 2");
    PhaseVector out = phi;
    const std::size_t n = out.size();
    for (double& p : out.phases) p = -p;
    out[0] += kPi / 2.0;
    out[n - 1] -= kPi / 2.0;
    return out;
}

PhaseVector invert_phases(const PhaseVector& phi) {
    PhaseVector out = phi;
    std::reverse(out.phases.begin(), out.phases.end());
    return out;
}

PhaseVector to_circuit_phases(const PhaseVector& phi, bool negated) {
    if (phi.size() < 2) throw std::invalid_argument("qsp: to_circuit_phases needs length >= 2");
    PhaseVector out = phi;
    const std::size_t n = out.size();
    if (negated) {
        for (double& p : out.phases) p = -p;
        out[0] += 3.0 * kPi / 4.0;
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] += kPi / 2.0;
        out[n - 1] -= kPi / 4.0;
    } else {
        out[0] += kPi / 4.0;
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] += kPi / 2.0;
        out[n - 1] += kPi / 4.0;
    }
    return out;
}

}  // namespace qsp
