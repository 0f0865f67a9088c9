#include "qsp/optimizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;

struct ObjectiveContext {
    const ChebSeries* target = nullptr;
    NodeSet nodes;
    std::vector<double> target_at_nodes;
    int degree = 0;
    GradientWorkspace ws;
    std::vector<double> full_grad;
    PhaseVector full_phases;

    explicit ObjectiveContext(const ChebSeries& t, int d) : target(&t), degree(d) {
        nodes = chebyshev_nodes(reduced_length(d));
        target_at_nodes.resize(nodes.count());
        for (std::size_t j = 0; j < nodes.count(); ++j) {
            target_at_nodes[j] = clenshaw_eval(t, nodes.points[j]);
        }
        full_grad.resize(d + 1);
        full_phases.phases.resize(d + 1);
    }

    void expand_into(const std::vector<double>& red) {
        const int d = degree;
        const int dt = reduced_length(d);
        for (int i = 0; i < dt; ++i) full_phases[i] = red[i];
        if (d % 2 == 1) {
            for (int i = 0; i < dt; ++i) full_phases[d - i] = red[i];
        } else {
            for (int i = 0; i < dt - 1; ++i) full_phases[d - i] = red[i];
        }
    }

    // Value, gradient (optional) and max node residual in one sweep.
    double evaluate(const std::vector<double>& red, std::span<double> grad, double* max_err) {
        expand_into(red);
        const int d = degree;
        const std::size_t dt = nodes.count();
        const bool want_grad = !grad.empty();
        if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

        double sum_sq = 0.0;
        double err = 0.0;
        for (std::size_t j = 0; j < dt; ++j) {
            double f;
            if (want_grad) {
                f = value_and_gradient(full_phases, nodes.points[j], full_grad, ws);
            } else {
                f = real_component(full_phases, nodes.points[j]);
            }
            const double r = f - target_at_nodes[j];
            sum_sq += r * r;
            err = std::max(err, std::abs(r));
            if (want_grad) {
                for (std::size_t i = 0; i < grad.size(); ++i) {
                    double g = full_grad[i];
                    const std::size_t mirror = d - i;
                    if (mirror != i) g += full_grad[mirror];
                    grad[i] += r * g;
                }
            }
        }
        if (want_grad) {
            for (double& g : grad) g /= static_cast<double>(dt);
        }
        if (max_err) *max_err = err;
        return sum_sq / (2.0 * static_cast<double>(dt));
    }
};

void check_target(const ChebSeries& target, int& degree_out) {
    if (target.parity == Parity::none) {
        throw std::invalid_argument("optimizer: target needs a definite parity");
    }
    const int d = target.degree();
    if (d < 0) throw std::invalid_argument("optimizer: target is the zero series");
    if (parity_of_degree(d) != target.parity) {
        throw std::invalid_argument("optimizer: target degree does not match its parity tag");
    }
    degree_out = d;
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::success: return "success";
        case SolveStatus::iteration_limit: return "iteration-limit";
        case SolveStatus::line_search_stall: return "line-search-stall";
        default: return "invalid-target";
    }
}

ReducedPhases reduce_symmetric(const PhaseVector& phi, double tol) {
    if (!phi.is_symmetric(tol)) {
        throw std::invalid_argument("optimizer: phase vector is not symmetric");
    }
    const int d = phi.degree();
    const int dt = reduced_length(d);
    ReducedPhases red;
    red.parent_degree = d;
    red.values.assign(phi.phases.begin(), phi.phases.begin() + dt);
    return red;
}

PhaseVector expand_symmetric(const ReducedPhases& red) {
    const int d = red.parent_degree;
    if (static_cast<int>(red.values.size()) != reduced_length(d)) {
        throw std::invalid_argument("optimizer: reduced vector length does not match degree");
    }
    PhaseVector out;
    out.phases.resize(d + 1);
    const int dt = reduced_length(d);
    for (int i = 0; i < dt; ++i) {
        out[i] = red.values[i];
        out[d - i] = red.values[i];
    }
    return out;
}

ReducedPhases canonical_initial(int degree) {
    if (degree < 0) throw std::invalid_argument("optimizer: negative degree");
    ReducedPhases red;
    red.parent_degree = degree;
    red.values.assign(reduced_length(degree), 0.0);
    red.values[0] = kPi / 4.0;
    return red;
}

std::vector<double> initial_inverse_hessian(int degree) {
    if (degree < 0) throw std::invalid_argument("optimizer: negative degree");
    std::vector<double> diag(reduced_length(degree), 0.5);
    if (degree % 2 == 0) diag.back() = 1.0;
    return diag;
}

double objective(const ReducedPhases& red, const ChebSeries& target, const NodeSet& nodes,
                 std::span<double> grad, double* max_err_out) {
    int d = 0;
    check_target(target, d);
    if (d != red.parent_degree) {
        throw std::invalid_argument("optimizer: target parity/degree mismatch with phases");
    }
    if (nodes.count() != static_cast<std::size_t>(reduced_length(d))) {
        throw std::invalid_argument("optimizer: node set does not match degree");
    }
    if (!grad.empty() && grad.size() != red.values.size()) {
        throw std::invalid_argument("optimizer: gradient span size mismatch");
    }
    ObjectiveContext ctx(target, d);
    ctx.nodes = nodes;
    for (std::size_t j = 0; j < nodes.count(); ++j) {
        ctx.target_at_nodes[j] = clenshaw_eval(target, nodes.points[j]);
    }
    return ctx.evaluate(red.values, grad, max_err_out);
}

SolveReport lbfgs_solve(const ChebSeries& target, const SolverConfig& config,
                        const ReducedPhases& initial) {
    const auto t_start = std::chrono::steady_clock::now();

    int d = 0;
    check_target(target, d);
    if (initial.parent_degree != d) {
        throw std::invalid_argument("optimizer: initial point degree mismatch");
    }

    // Reject targets that leave no unitarity headroom; the caller owns any
    // rescaling decision.
    {
        const int grid = 10001;
        for (int i = 0; i < grid; ++i) {
            const double x = -1.0 + 2.0 * i / (grid - 1.0);
            const double v = std::abs(clenshaw_eval(target, x));
            if (v > 1.0 - config.scale_margin_eta) {
                std::ostringstream msg;
                msg << "optimizer: |f(" << x << ")| = " << v << " exceeds "
                    << (1.0 - config.scale_margin_eta);
                throw std::invalid_argument(msg.str());
            }
        }
    }

    ObjectiveContext ctx(target, d);
    const int dt = reduced_length(d);
    const int memory = std::max(1, std::min(config.lbfgs_memory, dt));
    const std::vector<double> b0 = initial_inverse_hessian(d);

    std::vector<double> x = initial.values;
    std::vector<double> grad(dt), grad_new(dt), q(dt), trial(dt);
    double max_err = 0.0;
    double value = ctx.evaluate(x, grad, &max_err);

    std::vector<double> best_x = x;
    double best_err = max_err;

    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::deque<Pair> history;
    std::vector<double> alpha_buf;

    SolveStatus status = SolveStatus::iteration_limit;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        if (max_err < config.epsilon) {
            status = SolveStatus::success;
            break;
        }
        if (config.on_iteration) config.on_iteration(iter, value, max_err);

        // Two-loop recursion with the constant diagonal seed.
        q = grad;
        alpha_buf.assign(history.size(), 0.0);
        for (std::size_t h = history.size(); h-- > 0;) {
            const Pair& p = history[h];
            double a = 0.0;
            for (int i = 0; i < dt; ++i) a += p.s[i] * q[i];
            a *= p.rho;
            alpha_buf[h] = a;
            for (int i = 0; i < dt; ++i) q[i] -= a * p.y[i];
        }
        for (int i = 0; i < dt; ++i) q[i] *= b0[i];
        for (std::size_t h = 0; h < history.size(); ++h) {
            const Pair& p = history[h];
            double beta = 0.0;
            for (int i = 0; i < dt; ++i) beta += p.y[i] * q[i];
            beta *= p.rho;
            for (int i = 0; i < dt; ++i) q[i] += p.s[i] * (alpha_buf[h] - beta);
        }

        // Descent direction; fall back to preconditioned steepest descent if
        // the curvature history turned the direction uphill.
        double slope = 0.0;
        for (int i = 0; i < dt; ++i) slope += -q[i] * grad[i];
        if (slope >= 0.0) {
            for (int i = 0; i < dt; ++i) q[i] = b0[i] * grad[i];
            slope = 0.0;
            for (int i = 0; i < dt; ++i) slope += -q[i] * grad[i];
        }

        // Backtracking line search (Armijo).
        double step = 1.0;
        double value_new = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < dt; ++i) trial[i] = x[i] - step * q[i];
            value_new = ctx.evaluate(trial, {}, nullptr);
            if (value_new <= value + config.armijo_constant * step * slope) {
                accepted = true;
                break;
            }
            step *= config.backtrack_factor;
        }
        if (!accepted) {
            status = SolveStatus::line_search_stall;
            break;
        }

        value_new = ctx.evaluate(trial, grad_new, &max_err);

        Pair pair;
        pair.s.resize(dt);
        pair.y.resize(dt);
        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (int i = 0; i < dt; ++i) {
            pair.s[i] = trial[i] - x[i];
            pair.y[i] = grad_new[i] - grad[i];
            sy += pair.s[i] * pair.y[i];
            ss += pair.s[i] * pair.s[i];
            yy += pair.y[i] * pair.y[i];
        }
        if (sy > 1e-14 * std::sqrt(ss * yy)) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            if (static_cast<int>(history.size()) > memory) history.pop_front();
        }

        x = trial;
        grad = grad_new;
        value = value_new;
        if (max_err < best_err) {
            best_err = max_err;
            best_x = x;
        }
    }

    if (status == SolveStatus::success) {
        best_x = x;
        best_err = max_err;
    }

    SolveReport report;
    ReducedPhases solution{best_x, d};
    report.phases = canonicalized(expand_symmetric(solution));
    // Recompute diagnostics from the canonicalized phases so that stored
    // numbers reproduce exactly from the stored vector.
    {
        ReducedPhases canon = reduce_symmetric(report.phases, 1e-9);
        report.objective_value = ctx.evaluate(canon.values, {}, &report.max_node_error);
    }
    report.iterations = iter;
    report.scale_divisor = target.scale_divisor;
    report.target_degree = d;
    report.status = status;
    if (status != SolveStatus::success && best_err < config.epsilon) {
        report.status = SolveStatus::success;
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

SolveReport lbfgs_solve(const ChebSeries& target, const SolverConfig& config) {
    int d = 0;
    check_target(target, d);
    return lbfgs_solve(target, config, canonical_initial(d));
}

std::vector<PartSolve> solve_function(const std::function<complexd(double)>& F, int degree,
                                      double alpha, const SolverConfig& config) {
    if (!(alpha > 0.0)) throw std::invalid_argument("optimizer: alpha must be positive");
    const int K = default_quadrature_points(degree);
    const int even_degree = degree - (degree % 2);
    const int odd_degree = (degree >= 1) ? degree - 1 + (degree % 2) : 0;

    std::vector<std::pair<std::string, ChebSeries>> parts;
    auto add_part = [&](const std::string& label, const std::function<double(double)>& g,
                        int deg, Parity parity) {
        if (deg < 0 || (parity == Parity::odd && deg < 1)) return;
        ChebSeries s = coeffs_from_function(g, deg, K, parity);
        double cmax = 0.0;
        for (double c : s.coeffs) cmax = std::max(cmax, std::abs(c));
        if (cmax < 1e-13) return;  // part vanishes
        parts.emplace_back(label, std::move(s));
    };

    add_part("real-even", [&](double x) { return 0.5 * (F(x).real() + F(-x).real()) / alpha; },
             even_degree, Parity::even);
    add_part("real-odd", [&](double x) { return 0.5 * (F(x).real() - F(-x).real()) / alpha; },
             odd_degree, Parity::odd);
    add_part("imag-even", [&](double x) { return 0.5 * (F(x).imag() + F(-x).imag()) / alpha; },
             even_degree, Parity::even);
    add_part("imag-odd", [&](double x) { return 0.5 * (F(x).imag() - F(-x).imag()) / alpha; },
             odd_degree, Parity::odd);

    for (auto& [label, series] : parts) series.scale_divisor = alpha;
    return solve_parts(parts, config);
}

std::vector<PartSolve> solve_parts(const std::vector<std::pair<std::string, ChebSeries>>& parts,
                                   const SolverConfig& config) {
    std::vector<PartSolve> out;
    out.reserve(parts.size());
    for (const auto& [label, series] : parts) {
        PartSolve ps;
        ps.label = label;
        ps.target = series;
        ps.report = lbfgs_solve(series, config);
        out.push_back(std::move(ps));
    }
    return out;
}

std::vector<std::vector<double>> fd_hessian(const ReducedPhases& red, const ChebSeries& target,
                                            double step) {
    const int dt = static_cast<int>(red.values.size());
    if (dt > 400) throw std::invalid_argument("optimizer: dense Hessian restricted to dtilde <= 400");
    int d = 0;
    check_target(target, d);
    ObjectiveContext ctx(target, d);

    auto value_at = [&](const std::vector<double>& v) { return ctx.evaluate(v, {}, nullptr); };

    std::vector<std::vector<double>> h(dt, std::vector<double>(dt, 0.0));
    std::vector<double> v = red.values;
    const double f0 = value_at(v);
    for (int i = 0; i < dt; ++i) {
        for (int j = i; j < dt; ++j) {
            double hij;
            if (i == j) {
                v[i] = red.values[i] + step;
                const double fp = value_at(v);
                v[i] = red.values[i] - step;
                const double fm = value_at(v);
                v[i] = red.values[i];
                hij = (fp - 2.0 * f0 + fm) / (step * step);
            } else {
                v[i] = red.values[i] + step;
                v[j] = red.values[j] + step;
                const double fpp = value_at(v);
                v[j] = red.values[j] - step;
                const double fpm = value_at(v);
                v[i] = red.values[i] - step;
                v[j] = red.values[j] + step;
                const double fmp = value_at(v);
                v[j] = red.values[j] - step;
                const double fmm = value_at(v);
                v[i] = red.values[i];
                v[j] = red.values[j];
                hij = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
            }
            h[i][j] = hij;
            h[j][i] = hij;
        }
    }
    return h;
}

double hessian_condition_number(const ReducedPhases& red, const ChebSeries& target, double step) {
    const auto h = fd_hessian(red, target, step);
    const int n = static_cast<int>(h.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = h[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& ev = es.eigenvalues();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < n; ++i) {
        lo = std::min(lo, std::abs(ev[i]));
        hi = std::max(hi, std::abs(ev[i]));
    }
    return hi / lo;
}

}  // namespace qsp
