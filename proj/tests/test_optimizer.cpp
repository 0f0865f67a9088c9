#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qsp/approx.hpp"
#include "qsp/optimizer.hpp"

using namespace qsp;

namespace {

constexpr double kPi = std::numbers::pi;

ChebSeries random_target(int degree, double linf, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ChebSeries s;
    s.coeffs.assign(degree + 1, 0.0);
    for (int j = degree % 2; j <= degree; j += 2) s.coeffs[j] = dist(rng);
    if (std::abs(s.coeffs[degree]) < 0.1) s.coeffs[degree] = 0.5;
    s.parity = parity_of_degree(degree);
    const double m = grid_max_abs(s, 4001);
    for (double& c : s.coeffs) c *= linf / m;
    return s;
}

}  // namespace

TEST_CASE("reduce and expand") {
    const ReducedPhases r1 = reduce_symmetric(PhaseVector({0.1, 0.2, 0.2, 0.1}));
    CHECK(r1.parent_degree == 3);
    CHECK(r1.values == std::vector<double>{0.1, 0.2});

    const ReducedPhases r2 = reduce_symmetric(PhaseVector({0.1, 0.2, 0.3, 0.2, 0.1}));
    CHECK(r2.parent_degree == 4);
    CHECK(r2.values == std::vector<double>{0.1, 0.2, 0.3});

    CHECK_THROWS_AS(reduce_symmetric(PhaseVector({0.1, 0.2})), std::invalid_argument);

    const PhaseVector e1 = expand_symmetric({{0.5, -0.25}, 3});
    CHECK(e1.phases == std::vector<double>{0.5, -0.25, -0.25, 0.5});
    const PhaseVector e2 = expand_symmetric({{0.5, -0.25}, 2});
    CHECK(e2.phases == std::vector<double>{0.5, -0.25, 0.5});

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-kPi, kPi);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 1 + rep % 23;
        ReducedPhases red;
        red.parent_degree = d;
        red.values.resize(reduced_length(d));
        for (double& v : red.values) v = dist(rng);
        const PhaseVector full = expand_symmetric(red);
        CHECK(full.is_symmetric(0.0));
        const ReducedPhases back = reduce_symmetric(full);
        CHECK(back.values == red.values);
    }
}

TEST_CASE("canonical initial point") {
    const ReducedPhases c3 = canonical_initial(3);
    CHECK(c3.values == std::vector<double>{kPi / 4, 0.0});
    const ReducedPhases c4 = canonical_initial(4);
    CHECK(c4.values == std::vector<double>{kPi / 4, 0.0, 0.0});
    const PhaseVector full = expand_symmetric(canonical_initial(6));
    CHECK(full.phases == std::vector<double>{kPi / 4, 0, 0, 0, 0, 0, kPi / 4});
}

TEST_CASE("initial inverse Hessian values") {
    CHECK(initial_inverse_hessian(5) == std::vector<double>{0.5, 0.5, 0.5});
    CHECK(initial_inverse_hessian(4) == std::vector<double>{0.5, 0.5, 1.0});
}

TEST_CASE("objective value and gradient") {
    std::mt19937 rng(5);

    // At the canonical start f_Phi vanishes identically, so the objective is
    // the mean square of the target over the nodes.
    const int d = 9;
    const ChebSeries target = random_target(d, 0.8, rng);
    const NodeSet nodes = chebyshev_nodes(reduced_length(d));
    const double value = objective(canonical_initial(d), target, nodes);
    double expect = 0.0;
    for (double x : nodes.points) {
        const double f = clenshaw_eval(target, x);
        expect += f * f;
    }
    expect /= 2.0 * nodes.count();
    CHECK(value == doctest::Approx(expect).epsilon(1e-14));

    // Self-consistency: the series of an expanded reduced vector is an exact
    // minimizer.
    ReducedPhases red;
    red.parent_degree = 8;
    red.values = {0.9, 0.21, -0.15, 0.09, 0.05};
    ChebSeries self = coeffs_of_qsp(expand_symmetric(red));
    self = with_parity(std::move(self), Parity::even);
    const double self_value = objective(red, self, chebyshev_nodes(reduced_length(8)));
    CHECK(self_value < 1e-26);

    // Gradient against central finite differences at d = 11.
    const int d2 = 11;
    const ChebSeries t2 = random_target(d2, 0.7, rng);
    const NodeSet n2 = chebyshev_nodes(reduced_length(d2));
    ReducedPhases p2;
    p2.parent_degree = d2;
    p2.values.resize(reduced_length(d2));
    std::uniform_real_distribution<double> pd(-1.0, 1.0);
    for (double& v : p2.values) v = pd(rng);

    std::vector<double> grad(p2.values.size());
    objective(p2, t2, n2, grad);
    const double h = 1e-5;
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    for (std::size_t i = 0; i < p2.values.size(); ++i) {
        ReducedPhases pp = p2;
        pp.values[i] += h;
        const double fp = objective(pp, t2, n2);
        pp.values[i] = p2.values[i] - h;
        const double fm = objective(pp, t2, n2);
        const double fd = (fp - fm) / (2.0 * h);
        CHECK(std::abs(grad[i] - fd) / gmax < 1e-6);
    }

    // Parity mismatch is rejected.
    CHECK_THROWS_AS(objective(p2, random_target(10, 0.5, rng), n2), std::invalid_argument);
}

TEST_CASE("finite-difference Hessian at the canonical start matches the constant form") {
    std::mt19937 rng(7);
    for (int d : {7, 8}) {
        const ChebSeries target = random_target(d, 0.75, rng);
        const auto hess = fd_hessian(canonical_initial(d), target, 1e-4);
        const int dt = reduced_length(d);
        for (int i = 0; i < dt; ++i) {
            for (int j = 0; j < dt; ++j) {
                double expect = 0.0;
                if (i == j) expect = (d % 2 == 0 && i == dt - 1) ? 1.0 : 2.0;
                CHECK(std::abs(hess[i][j] - expect) < 1e-5);
            }
        }
    }
}

TEST_CASE("gradient vanishes at the all-zero phases for any target") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const int d = 6 + 3 * rep;
        const ChebSeries target = random_target(d, 0.8, rng);
        ReducedPhases zero;
        zero.parent_degree = d;
        zero.values.assign(reduced_length(d), 0.0);
        std::vector<double> grad(zero.values.size());
        objective(zero, target, chebyshev_nodes(reduced_length(d)), grad);
        for (double g : grad) CHECK(std::abs(g) < 1e-10);
    }
}

TEST_CASE("lbfgs solves the linear target analytically") {
    const ChebSeries target({0.0, 0.5}, Parity::odd);
    const SolveReport report = lbfgs_solve(target);
    CHECK(report.status == SolveStatus::success);
    CHECK(report.max_node_error < 1e-12);
    REQUIRE(report.phases.size() == 2);
    CHECK(report.phases[0] == doctest::Approx(report.phases[1]).epsilon(1e-12));
    // cos(2 phi) = 1/2 up to phase equivalence.
    CHECK(std::cos(2.0 * report.phases[0]) == doctest::Approx(0.5).epsilon(1e-12));
    for (double x : {-0.9, -0.2, 0.5, 1.0}) {
        CHECK(real_component(report.phases, x) == doctest::Approx(0.5 * x).epsilon(1e-12));
    }
}

TEST_CASE("lbfgs solves the eigenstate filter target") {
    const ChebSeries target = scale_series(eigenstate_filter(30, 0.1), std::numbers::sqrt2);
    const SolveReport report = lbfgs_solve(target);
    CHECK(report.status == SolveStatus::success);
    CHECK(report.max_node_error < 1e-12);
    CHECK(report.iterations < 500);
    CHECK(report.scale_divisor == doctest::Approx(std::numbers::sqrt2));
    CHECK(report.target_degree == 60);
}

TEST_CASE("lbfgs solves the tau=100 cosine to full precision") {
    const JacobiAngerParts parts = jacobi_anger(100.0, 1e-14);
    const ChebSeries target = scale_series(parts.even_part, 2.0);
    const SolveReport report = lbfgs_solve(target);
    CHECK(report.status == SolveStatus::success);
    CHECK(report.max_node_error < 1e-12);

    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = -1.0 + 2.0 * i / 10000.0;
        worst = std::max(worst,
                         std::abs(real_component(report.phases, x) - 0.5 * std::cos(100.0 * x)));
    }
    CHECK(worst < 2e-12);
}

TEST_CASE("lbfgs rejects an oversized target and reports the iteration cap") {
    ChebSeries big({0.0, 1.2}, Parity::odd);
    CHECK_THROWS_AS(lbfgs_solve(big), std::invalid_argument);

    const ChebSeries target = scale_series(eigenstate_filter(12, 0.15), std::numbers::sqrt2);
    SolverConfig starved;
    starved.max_iterations = 2;
    const SolveReport report = lbfgs_solve(target, starved);
    CHECK(report.status != SolveStatus::success);
    CHECK(report.iterations == 2);
    CHECK(report.phases.size() == 25);  // best-so-far phases still delivered
}

TEST_CASE("line search decreases the objective monotonically") {
    const ChebSeries target = scale_series(eigenstate_filter(10, 0.2), std::numbers::sqrt2);
    std::vector<double> values;
    SolverConfig config;
    config.on_iteration = [&](int, double value, double) { values.push_back(value); };
    lbfgs_solve(target, config);
    REQUIRE(values.size() > 3);
    for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= values[i - 1] * (1 + 1e-12));
}

TEST_CASE("identical solves are bit-identical") {
    const ChebSeries target = scale_series(eigenstate_filter(14, 0.2), std::numbers::sqrt2);
    const SolveReport a = lbfgs_solve(target);
    const SolveReport b = lbfgs_solve(target);
    CHECK(a.iterations == b.iterations);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.max_node_error == b.max_node_error);
    REQUIRE(a.phases.size() == b.phases.size());
    for (std::size_t i = 0; i < a.phases.size(); ++i) CHECK(a.phases[i] == b.phases[i]);
}

TEST_CASE("solve_function splits a complex exponential into two parts") {
    const double tau = 30.0;
    const JacobiAngerParts ja = jacobi_anger(tau, 1e-14);
    auto F = [&](double x) { return complexd{std::cos(tau * x), -std::sin(tau * x)}; };
    const auto parts = solve_function(F, ja.degree, 2.0);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].label == "real-even");
    CHECK(parts[1].label == "imag-odd");
    for (const auto& p : parts) {
        CHECK(p.report.status == SolveStatus::success);
        CHECK(p.report.max_node_error < 1e-12);
        CHECK(p.report.scale_divisor == 2.0);
    }
}

TEST_CASE("solve_function emits one part for a real even function") {
    const auto parts = solve_function([](double x) { return complexd{std::cos(3.0 * x), 0.0}; },
                                      12, 2.0);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].label == "real-even");
    CHECK(parts[0].report.max_node_error < 1e-12);
}

TEST_CASE("solve_function handles the linear target") {
    const auto parts = solve_function([](double x) { return complexd{x, 0.0}; }, 1, 2.0);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].label == "real-odd");
    CHECK(std::cos(2.0 * parts[0].report.phases[0]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hessian diagnostics") {
    std::mt19937 rng(13);
    const ChebSeries target = random_target(9, 0.6, rng);
    const SolveReport report = lbfgs_solve(target);
    REQUIRE(report.status == SolveStatus::success);
    const double cond = hessian_condition_number(reduce_symmetric(report.phases, 1e-9), target);
    CHECK(cond >= 1.0);
    CHECK(std::isfinite(cond));

    ReducedPhases big;
    big.parent_degree = 801;
    big.values.assign(401, 0.0);
    CHECK_THROWS_AS(fd_hessian(big, target), std::invalid_argument);
}
