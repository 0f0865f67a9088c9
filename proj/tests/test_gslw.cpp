#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qsp/approx.hpp"
#include "qsp/gslw.hpp"
#include "qsp/optimizer.hpp"

using namespace qsp;

namespace {

constexpr double kPi = std::numbers::pi;

double constraint_residual(const ComplementarySet& set, int grid = 1001) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double x = -1.0 + 2.0 * i / (grid - 1.0);
        const double f = clenshaw_eval(set.real_target, x);
        const double b = clenshaw_eval(set.imag_complement, x);
        const double c = clenshaw_eval(set.q_complement, x);
        worst = std::max(worst, std::abs(f * f + b * b + (1.0 - x * x) * c * c - 1.0));
    }
    return worst;
}

ChebSeries random_admissible(int degree, double linf, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ChebSeries s;
    s.coeffs.assign(degree + 1, 0.0);
    for (int j = degree % 2; j <= degree; j += 2) s.coeffs[j] = dist(rng);
    if (std::abs(s.coeffs[degree]) < 0.2) s.coeffs[degree] = 0.4;
    s.parity = parity_of_degree(degree);
    const double m = grid_max_abs(s, 4001);
    for (double& c : s.coeffs) c *= linf / m;
    return s;
}

// R_{order} written in the first-kind basis.
ChebSeries second_kind_in_t(int order) {
    ChebSeries out;
    out.coeffs.assign(order + 1, 0.0);
    for (int j = order; j >= 0; j -= 2) out.coeffs[j] = (j == 0) ? 1.0 : 2.0;
    return out;
}

}  // namespace

TEST_CASE("complementary polynomials for the zero target") {
    ChebSeries zero;
    zero.coeffs.assign(4, 0.0);  // degree-3 convention
    zero.parity = Parity::odd;
    const ComplementarySet set = complementary_polynomials(zero);
    REQUIRE(set.imag_complement.coeffs.size() == 4);
    CHECK(set.imag_complement.coeffs[3] == 1.0);  // B = T_3
    CHECK(constraint_residual(set) < 1e-12);
    CHECK(set.imag_complement.parity == Parity::odd);
    CHECK(set.q_complement.parity == Parity::even);
}

TEST_CASE("complementary polynomials for f(x) = x") {
    const ComplementarySet set = complementary_polynomials(ChebSeries({0.0, 1.0}, Parity::odd));
    for (double b : set.imag_complement.coeffs) CHECK(std::abs(b) < 1e-12);
    REQUIRE(!set.q_complement.coeffs.empty());
    CHECK(set.q_complement.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(constraint_residual(set) < 1e-8);
}

TEST_CASE("complementary polynomials for 0.9 T_5") {
    ChebSeries f;
    f.coeffs.assign(6, 0.0);
    f.coeffs[5] = 0.9;
    f.parity = Parity::odd;
    const ComplementarySet set = complementary_polynomials(f);
    CHECK(constraint_residual(set) < 1e-8);
    CHECK(set.imag_complement.parity == Parity::odd);
    CHECK(set.q_complement.parity == Parity::even);
}

TEST_CASE("complementary polynomials enforce the caps") {
    ChebSeries big;
    big.coeffs.assign(32, 0.0);
    big.coeffs[31] = 0.5;
    big.parity = Parity::odd;
    CHECK_THROWS_AS(complementary_polynomials(big), std::invalid_argument);

    CHECK_THROWS_AS(complementary_polynomials(ChebSeries({0.0, 1.5}, Parity::odd)),
                    std::invalid_argument);
}

TEST_CASE("reduce_to_phases canonical cases") {
    const int d = 5;
    ChebSeries td;
    td.coeffs.assign(d + 1, 0.0);
    td.coeffs[d] = 1.0;
    const ChebSeries rd1 = second_kind_in_t(d - 1);
    ChebSeries zero({0.0});

    // P = i T_d, Q = R_{d-1}  ->  (pi/4, 0, ..., 0, pi/4)
    const PhaseVector caps = reduce_to_phases(zero, td, rd1, zero);
    REQUIRE(caps.size() == d + 1);
    CHECK(caps[0] == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(caps[d] == doctest::Approx(kPi / 4).epsilon(1e-12));
    for (int i = 1; i < d; ++i) CHECK(std::abs(caps[i]) < 1e-12);

    // P = T_d, Q = R_{d-1}  ->  all zeros
    const PhaseVector zeros = reduce_to_phases(td, zero, rd1, zero);
    for (std::size_t i = 0; i < zeros.size(); ++i) CHECK(std::abs(zeros[i]) < 1e-12);

    // Degree one with a real constant Q: P = x e^{i pi/3}.
    const PhaseVector pair = reduce_to_phases(ChebSeries({0.0, 0.5}),
                                              ChebSeries({0.0, std::sqrt(3.0) / 2.0}),
                                              ChebSeries({1.0}), ChebSeries({0.0}));
    REQUIRE(pair.size() == 2);
    CHECK(pair[0] == doctest::Approx(kPi / 6).epsilon(1e-12));
    CHECK(pair[1] == doctest::Approx(kPi / 6).epsilon(1e-12));
}

TEST_CASE("gslw_solve recovers the linear target") {
    const SolveReport report = gslw_solve(ChebSeries({0.0, 0.5}, Parity::odd));
    CHECK(report.max_node_error < 1e-12);
    for (double x : {-0.8, 0.0, 0.33, 1.0}) {
        CHECK(real_component(report.phases, x) == doctest::Approx(0.5 * x).epsilon(1e-10));
    }
}

TEST_CASE("gslw_solve agrees with the optimizer on the small eigenstate filter") {
    const ChebSeries target = scale_series(eigenstate_filter(3, 0.3), std::numbers::sqrt2);
    const SolveReport direct = gslw_solve(target);
    const SolveReport iterative = lbfgs_solve(target);
    CHECK(direct.max_node_error < 1e-8);
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 2.0 * i / 200.0;
        CHECK(std::abs(real_component(direct.phases, x) -
                       real_component(iterative.phases, x)) < 1e-8);
    }
}

TEST_CASE("gslw_solve agrees with the optimizer on a truncated cosine") {
    const JacobiAngerParts parts = jacobi_anger(5.0, 1e-14);
    ChebSeries target = scale_series(parts.even_part, 2.0);
    target.coeffs.resize(15);  // degree-14 truncation
    const SolveReport direct = gslw_solve(target);
    const SolveReport iterative = lbfgs_solve(target);
    CHECK(direct.max_node_error < 1e-8);
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 2.0 * i / 200.0;
        CHECK(std::abs(real_component(direct.phases, x) -
                       real_component(iterative.phases, x)) < 1e-8);
    }
}

TEST_CASE("cross-method agreement on random admissible targets") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> ddist(2, 20);
    for (int rep = 0; rep < 20; ++rep) {
        const ChebSeries f = random_admissible(ddist(rng), 0.88, rng);
        const SolveReport direct = gslw_solve(f);
        const SolveReport iterative = lbfgs_solve(f);
        REQUIRE(iterative.status == SolveStatus::success);
        CHECK(direct.max_node_error < 1e-8);
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = -1.0 + 2.0 * i / 200.0;
            worst = std::max(worst, std::abs(real_component(direct.phases, x) -
                                             real_component(iterative.phases, x)));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("gslw_solve rejects degrees beyond the cap") {
    ChebSeries f;
    f.coeffs.assign(32, 0.0);
    f.coeffs[31] = 0.4;
    f.parity = Parity::odd;
    CHECK_THROWS_AS(gslw_solve(f), std::invalid_argument);
}
