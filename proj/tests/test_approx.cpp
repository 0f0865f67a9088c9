#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsp/approx.hpp"

using namespace qsp;

namespace {

constexpr double kPi = std::numbers::pi;

// 30-term power series for J_0, independent of the recurrence path.
double j0_series(double tau) {
    double acc = 0.0;
    double term = 1.0;  // m = 0
    for (int m = 0; m < 30; ++m) {
        if (m > 0) {
            term *= -(tau / 2.0) * (tau / 2.0) / (static_cast<double>(m) * m);
        }
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("bessel_j small orders") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(3, 0.0) == 0.0);
    CHECK(std::abs(bessel_j(0, 1.0) - j0_series(1.0)) < 1e-14);
    CHECK(std::abs(bessel_j(0, 4.5) - j0_series(4.5)) < 1e-14);

    for (int k : {0, 1, 5, 17, 40}) {
        for (double tau : {0.3, 2.0, 19.5, 120.0}) {
            CHECK(std::abs(bessel_j(k, tau) - std::cyl_bessel_j(k, tau)) < 1e-13);
        }
    }

    CHECK_THROWS_AS(bessel_j(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(50001, 1.0), std::invalid_argument);
}

TEST_CASE("jacobi_anger small tau limit") {
    const JacobiAngerParts parts = jacobi_anger(1e-8, 1e-6);
    CHECK(parts.even_part.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 2; k < parts.even_part.coeffs.size(); ++k) {
        CHECK(std::abs(parts.even_part.coeffs[k]) < 1e-6);
    }
    for (double c : parts.odd_part.coeffs) CHECK(std::abs(c) < 1e-6);
}

TEST_CASE("jacobi_anger parts sum to the trig components") {
    const JacobiAngerParts parts = jacobi_anger(3.0, 1e-14);
    CHECK(clenshaw_eval(parts.even_part, 0.5) == doctest::Approx(std::cos(1.5)).epsilon(1e-13));
    CHECK(clenshaw_eval(parts.odd_part, 0.5) == doctest::Approx(-std::sin(1.5)).epsilon(1e-13));
}

TEST_CASE("jacobi_anger degree rule and tail") {
    const JacobiAngerParts parts = jacobi_anger(100.0, 1e-14);
    CHECK(parts.degree == 173);  // ceil(140 + ln(1e14))
    CHECK(std::abs(2.0 * bessel_j(parts.degree + 1, 100.0)) < 1e-14);
}

TEST_CASE("jacobi_anger truncation error on a dense grid") {
    for (double tau : {1.0, 20.0, 500.0}) {
        const double eps0 = 1e-14;
        const JacobiAngerParts parts = jacobi_anger(tau, eps0);
        double worst = 0.0;
        for (int i = 0; i < 10001; ++i) {
            const double x = -1.0 + 2.0 * i / 10000.0;
            const double ce = clenshaw_eval(parts.even_part, x) - std::cos(tau * x);
            const double so = clenshaw_eval(parts.odd_part, x) + std::sin(tau * x);
            worst = std::max(worst, std::max(std::abs(ce), std::abs(so)));
        }
        CHECK(worst < 10.0 * eps0);
    }
}

TEST_CASE("eigenstate_filter normalization and boundary value") {
    for (int k : {1, 7, 30}) {
        for (double delta : {0.5, 0.1}) {
            const ChebSeries f = eigenstate_filter(k, delta);
            CHECK(f.parity == Parity::even);
            CHECK(f.degree() == 2 * k);
            CHECK(clenshaw_eval(f, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

            const double denom_arg = -1.0 - 2.0 * delta * delta / (1.0 - delta * delta);
            const double tk = ((k % 2 == 0) ? 1.0 : -1.0) *
                              std::cosh(k * std::acosh(-denom_arg));
            const double expect = ((k % 2 == 0) ? 1.0 : -1.0) / tk;
            CHECK(clenshaw_eval(f, delta) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("eigenstate_filter suppression bound") {
    const int k = 30;
    const double delta = 0.1;
    const ChebSeries f = eigenstate_filter(k, delta);
    const double bound = 2.0 * std::exp(-std::numbers::sqrt2 * k * delta);
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = delta + (1.0 - delta) * i / 4000.0;
        worst = std::max(worst, std::abs(clenshaw_eval(f, x)));
    }
    CHECK(worst <= bound);
    CHECK(bound == doctest::Approx(0.0287446).epsilon(1e-4));
}

TEST_CASE("inverse_truncation degenerate case is the identity") {
    const ChebSeries s = inverse_truncation_series(1, 0);
    REQUIRE(s.coeffs.size() == 2);
    CHECK(s.coeffs[0] == 0.0);
    CHECK(s.coeffs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("inverse_truncation kappa=10 degree and accuracy") {
    const ChebSeries f = inverse_truncation(10.0, 1e-14);
    CHECK(f.degree() == 759);
    CHECK(f.parity == Parity::odd);

    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = 0.1 + 0.9 * i / 2000.0;
        worst = std::max(worst, std::abs(clenshaw_eval(f, x) - 1.0 / x));
    }
    CHECK(worst < 1e-13);

    // Coefficient magnitudes decay monotonically.
    double prev = std::abs(f.coeffs[1]);
    for (int j = 3; j <= f.degree(); j += 2) {
        CHECK(std::abs(f.coeffs[j]) <= prev * (1.0 + 1e-15));
        prev = std::abs(f.coeffs[j]);
    }
}

TEST_CASE("remez reproduces a target inside the span") {
    const RemezResult r = remez_minimax([](double x) { return x; },
                                        {RemezBasis::Kind::odd_chebyshev, 1},
                                        IntervalSpec(0.1, 1.0));
    REQUIRE(r.series.coeffs.size() == 2);
    CHECK(r.series.coeffs[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.achieved_error < 1e-14);
}

TEST_CASE("remez minimal degrees for 1/x at eps0 = 1e-6") {
    const double kappa = 10.0, eps0 = 1e-6;
    const RemezSearchResult odd = remez_inverse(kappa, eps0, RemezBasis::Kind::odd_chebyshev);
    const int odd_degree = 2 * odd.basis_count - 1;
    CHECK(std::abs(odd_degree - 125) <= 4);
    CHECK(odd.result.achieved_error <= eps0);

    const RemezSearchResult even = remez_inverse(kappa, eps0, RemezBasis::Kind::even_chebyshev);
    const int even_degree = 2 * even.basis_count - 2;
    CHECK(std::abs(even_degree - 104) <= 4);
    CHECK(even.result.achieved_error <= eps0);

    CHECK(even_degree <= odd_degree);

    // Unweighted accuracy is bounded by kappa^2 eps0, attained near 1/kappa.
    for (const auto& r : {odd.result, even.result}) {
        double plain = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = 1.0 / kappa + (1.0 - 1.0 / kappa) * i / 2000.0;
            plain = std::max(plain, std::abs(clenshaw_eval(r.series, x) - 1.0 / x));
        }
        CHECK(plain <= kappa * kappa * eps0 * (1.0 + 1e-9));
    }
}

TEST_CASE("remez equioscillation and lower-bound properties") {
    auto inv = [](double x) { return 1.0 / x; };
    const double tol = 1e-2;
    const RemezResult r = remez_minimax(inv, {RemezBasis::Kind::odd_chebyshev, 20},
                                        IntervalSpec(0.2, 1.0), tol);

    // |Delta| never exceeds ||r||_inf along the run.
    for (const auto& [delta, rnorm] : r.history) {
        CHECK(delta <= rnorm * (1.0 + 1e-9));
    }

    // Signs alternate and magnitudes agree within the levelling tolerance.
    REQUIRE(r.reference_residuals.size() == 21);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < r.reference_residuals.size(); ++i) {
        if (i > 0) CHECK(r.reference_residuals[i] * r.reference_residuals[i - 1] < 0.0);
        lo = std::min(lo, std::abs(r.reference_residuals[i]));
        hi = std::max(hi, std::abs(r.reference_residuals[i]));
    }
    CHECK((hi - lo) / hi < 10.0 * tol);
}

TEST_CASE("remez full basis on a generic interval") {
    const RemezResult r = remez_minimax([](double x) { return std::cos(3.0 * x); },
                                        {RemezBasis::Kind::full, 8}, IntervalSpec(-1.0, 1.0));
    // Known behaviour: degree-7 minimax error for cos(3x) is small but nonzero.
    CHECK(r.achieved_error > 1e-8);
    CHECK(r.achieved_error < 1e-3);
    for (const auto& [delta, rnorm] : r.history) CHECK(delta <= rnorm * (1.0 + 1e-9));
}

TEST_CASE("remez rejects a Haar violation") {
    CHECK_THROWS(remez_minimax([](double x) { return x; },
                               {RemezBasis::Kind::odd_chebyshev, 2}, IntervalSpec(-0.5, 1.0)));
}

TEST_CASE("scale_series") {
    ChebSeries s({1.0, -2.0, 0.5});
    const ChebSeries h = scale_series(s, 2.0);
    CHECK(h.coeffs[0] == 0.5);
    CHECK(h.coeffs[1] == -1.0);
    CHECK(h.coeffs[2] == 0.25);
    CHECK(h.scale_divisor == 2.0);
    CHECK(scale_series(h, 3.0).scale_divisor == 6.0);
    CHECK_THROWS_AS(scale_series(s, 0.0), std::invalid_argument);
}

TEST_CASE("documented scalings keep targets inside the unit band") {
    const JacobiAngerParts parts = jacobi_anger(10.0, 1e-14);
    const ChebSeries half = scale_series(parts.even_part, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10001; ++i) {
        const double x = -1.0 + 2.0 * i / 10000.0;
        worst = std::max(worst, std::abs(clenshaw_eval(half, x)));
    }
    CHECK(worst <= 0.5 + 1e-12);

    const ChebSeries filt = scale_series(eigenstate_filter(12, 0.2), std::numbers::sqrt2);
    double fmax = 0.0;
    for (int i = 0; i < 10001; ++i) {
        const double x = -1.0 + 2.0 * i / 10000.0;
        fmax = std::max(fmax, std::abs(clenshaw_eval(filt, x)));
    }
    CHECK(fmax == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-9));
}
