// qsp-phase: command-line front end for computing QSP phase factors.
//
// Subcommands build a polynomial target (Jacobi-Anger, eigenstate filter,
// 1/x truncation or minimax), run the symmetric L-BFGS solver, and write a
// self-describing phase file; `verify` re-checks an existing file.
//
// Exit codes: 0 success, 2 nonconvergence, 3 warm-start mismatch,
// 4 invalid target, 5 I/O or corrupt file.

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsp/approx.hpp"
#include "qsp/chebyshev.hpp"
#include "qsp/optimizer.hpp"
#include "qsp/padding.hpp"
#include "qsp/phase_file.hpp"
#include "qsp/su2.hpp"

namespace {

constexpr int kExitNonconverged = 2;
constexpr int kExitWarmStartMismatch = 3;
constexpr int kExitInvalidTarget = 4;
constexpr int kExitIo = 5;

int thread_budget() {
    const char* env = std::getenv("QSP_PHASE_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

struct PartSpec {
    std::string label;
    qsp::ChebSeries target;
    // Analytic reference for the L-inf column; may be empty.
    std::function<double(double)> reference;
    // Grid the reference is valid on; defaults to [-1, 1].
    double ref_lo = -1.0, ref_hi = 1.0;
};

double linf_vs(const qsp::PhaseVector& phases, const std::function<double(double)>& f,
               double lo, double hi, int points = 10001) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1.0);
        worst = std::max(worst, std::abs(qsp::real_component(phases, x) - f(x)));
    }
    return worst;
}

qsp::PhaseFilePart to_file_part(const PartSpec& spec, const qsp::SolveReport& report) {
    qsp::PhaseFilePart part;
    part.label = spec.label;
    part.parity = spec.target.parity;
    part.degree = report.target_degree;
    part.phases = report.phases.phases;
    part.target_coeffs = spec.target.coeffs;
    part.max_node_error = report.max_node_error;
    part.iterations = report.iterations;
    part.wall_time_seconds = report.wall_time_seconds;
    part.converged = report.status == qsp::SolveStatus::success;
    part.linf_error_vs_function =
        spec.reference ? linf_vs(report.phases, spec.reference, spec.ref_lo, spec.ref_hi)
                       : report.max_node_error;
    return part;
}

void emit_plot_data(const std::string& prefix, const PartSpec& spec,
                    const qsp::SolveReport& report) {
    const std::string path = prefix + "." + spec.label + ".dat";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# x  f_phi(x)  f_target(x)\n";
    for (int i = 0; i <= 2000; ++i) {
        const double x = -1.0 + 2.0 * i / 2000.0;
        out << qsp::format_double(x) << "\t"
            << qsp::format_double(qsp::real_component(report.phases, x)) << "\t"
            << qsp::format_double(qsp::clenshaw_eval(spec.target, x)) << "\n";
    }
    std::printf("plot data written to %s\n", path.c_str());
}

// Solve every part (concurrently when QSP_PHASE_THREADS allows), write the
// file, print a summary, and map the result onto the exit-code contract.
int run_parts(const std::vector<PartSpec>& specs, const qsp::SolverConfig& config,
              qsp::PhaseFileV1 file, const std::string& out_path,
              const std::string& plot_prefix) {
    std::vector<qsp::SolveReport> reports(specs.size());
    const bool parallel = thread_budget() > 1 && specs.size() > 1;
    if (parallel) {
        std::vector<std::future<qsp::SolveReport>> futures;
        futures.reserve(specs.size());
        for (const PartSpec& spec : specs) {
            futures.push_back(std::async(std::launch::async, [&spec, &config] {
                return qsp::lbfgs_solve(spec.target, config);
            }));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            reports[i] = qsp::lbfgs_solve(specs[i].target, config);
        }
    }

    bool all_converged = true;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const qsp::PhaseFilePart part = to_file_part(specs[i], reports[i]);
        all_converged = all_converged && part.converged;
        file.parts.push_back(part);
        std::printf("%-12s degree %5d  iterations %5ld  max node error %.3e  Linf %.3e  [%s]\n",
                    part.label.c_str(), part.degree, part.iterations, part.max_node_error,
                    part.linf_error_vs_function, part.converged ? "converged" : "FAILED");
        if (!plot_prefix.empty()) emit_plot_data(plot_prefix, specs[i], reports[i]);
    }
    file.failed = !all_converged;
    qsp::write_phase_file(out_path, file);
    std::printf("phase file written to %s\n", out_path.c_str());
    return all_converged ? 0 : kExitNonconverged;
}

int cmd_hamsim(double tau, double eps0, const qsp::SolverConfig& config,
               const std::string& out, const std::string& plot) {
    const qsp::JacobiAngerParts ja = qsp::jacobi_anger(tau, eps0);
    std::printf("hamsim tau=%g: truncation degree %d\n", tau, ja.degree);

    std::vector<PartSpec> specs;
    specs.push_back({"real-even", qsp::scale_series(ja.even_part, 2.0),
                     [tau](double x) { return 0.5 * std::cos(tau * x); }, -1.0, 1.0});
    specs.push_back({"imag-odd", qsp::scale_series(ja.odd_part, 2.0),
                     [tau](double x) { return -0.5 * std::sin(tau * x); }, -1.0, 1.0});

    qsp::PhaseFileV1 file;
    file.target_kind = "hamsim";
    file.target_params = {{"tau", tau}, {"eps0", eps0}, {"epsilon", config.epsilon}};
    file.scale_divisor = 2.0;
    return run_parts(specs, config, std::move(file), out, plot);
}

int cmd_eigenfilter(int k, double delta, const qsp::SolverConfig& config,
                    const std::string& out, const std::string& plot) {
    const qsp::ChebSeries target =
        qsp::scale_series(qsp::eigenstate_filter(k, delta), std::numbers::sqrt2);
    const double shift = 2.0 / (1.0 - delta * delta);
    const double denom = qsp::chebyshev_t(k, -1.0 - shift * delta * delta);
    auto reference = [=](double x) {
        return qsp::chebyshev_t(k, -1.0 + shift * (x * x - delta * delta)) /
               (denom * std::numbers::sqrt2);
    };

    std::vector<PartSpec> specs;
    specs.push_back({"filter-even", target, reference, -1.0, 1.0});

    qsp::PhaseFileV1 file;
    file.target_kind = "eigenfilter";
    file.target_params = {{"k", static_cast<double>(k)},
                          {"delta", delta},
                          {"epsilon", config.epsilon}};
    file.scale_divisor = std::numbers::sqrt2;
    return run_parts(specs, config, std::move(file), out, plot);
}

int cmd_matinv(double kappa, const std::string& method, double eps0,
               const qsp::SolverConfig& config, const std::string& out,
               const std::string& plot) {
    qsp::ChebSeries approx;
    if (method == "trunc") {
        approx = qsp::inverse_truncation(kappa, eps0);
    } else {
        const auto kind = method == "remez-odd" ? qsp::RemezBasis::Kind::odd_chebyshev
                                                : qsp::RemezBasis::Kind::even_chebyshev;
        approx = qsp::remez_inverse(kappa, eps0, kind).result.series;
    }
    std::printf("matinv kappa=%g method=%s: approximation degree %d\n", kappa, method.c_str(),
                approx.degree());

    // No divisor is prescribed for 1/x targets; half the grid maximum keeps
    // the solve well inside the unit band.
    const double divisor = 2.0 * qsp::grid_max_abs(approx, 10001);
    const qsp::ChebSeries target = qsp::scale_series(approx, divisor);
    auto reference = [=](double x) { return 1.0 / (divisor * x); };

    std::vector<PartSpec> specs;
    specs.push_back(
        {std::string("inverse-") + (target.parity == qsp::Parity::odd ? "odd" : "even"), target,
         reference, 1.0 / kappa, 1.0});

    qsp::PhaseFileV1 file;
    file.target_kind = "matinv";
    file.method = method;
    file.target_params = {{"kappa", kappa},
                          {"eps0", eps0},
                          {"epsilon", config.epsilon},
                          {"degree", static_cast<double>(approx.degree())}};
    file.scale_divisor = divisor;
    return run_parts(specs, config, std::move(file), out, plot);
}

int cmd_solve(const std::string& coeff_path, const std::string& warm_path, int random_init,
              unsigned seed, const qsp::SolverConfig& config, const std::string& out,
              const std::string& plot) {
    const qsp::ChebSeries target = qsp::read_coeff_file(coeff_path);
    if (qsp::grid_max_abs(target) > 1.0 - config.scale_margin_eta) {
        std::fprintf(stderr, "error: target exceeds the unit band on [-1, 1]\n");
        return kExitInvalidTarget;
    }
    const int degree = target.degree();

    qsp::ReducedPhases initial = qsp::canonical_initial(degree);
    if (!warm_path.empty()) {
        qsp::PhaseFileV1 warm;
        try {
            warm = qsp::read_phase_file(warm_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kExitIo;
        }
        bool matched = false;
        for (const qsp::PhaseFilePart& part : warm.parts) {
            const int gap = degree - part.degree;
            if (part.parity != target.parity || gap < 0 || gap % 2 != 0) continue;
            qsp::SolveReport previous;
            previous.phases = qsp::PhaseVector(part.phases);
            previous.target_degree = part.degree;
            initial = qsp::padded_warm_start(previous, target);
            matched = true;
            std::printf("warm start from %s part '%s' (degree %d -> %d)\n", warm_path.c_str(),
                        part.label.c_str(), part.degree, degree);
            break;
        }
        if (!matched) {
            std::fprintf(stderr, "error: no warm-start part matches parity/degree\n");
            return kExitWarmStartMismatch;
        }
    }

    qsp::PhaseFileV1 file;
    file.target_kind = "custom";
    file.target_params = {{"degree", static_cast<double>(degree)},
                          {"epsilon", config.epsilon}};
    file.scale_divisor = target.scale_divisor;

    PartSpec spec{"custom", target, {}, -1.0, 1.0};
    qsp::SolveReport report;
    if (random_init > 0) {
        // Landscape diagnostic: restart from uniform random reduced vectors
        // and keep the best result.
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
        std::optional<qsp::SolveReport> best;
        for (int trial = 0; trial < random_init; ++trial) {
            qsp::ReducedPhases start;
            start.parent_degree = degree;
            start.values.resize(qsp::reduced_length(degree));
            for (double& v : start.values) v = dist(rng);
            const qsp::SolveReport attempt = qsp::lbfgs_solve(target, config, start);
            std::printf("random init %2d: objective %.3e  max node error %.3e\n", trial,
                        attempt.objective_value, attempt.max_node_error);
            if (!best || attempt.max_node_error < best->max_node_error) best = attempt;
        }
        report = *best;
    } else {
        report = qsp::lbfgs_solve(target, config, initial);
    }

    const qsp::PhaseFilePart part = to_file_part(spec, report);
    file.parts.push_back(part);
    file.failed = !part.converged;
    qsp::write_phase_file(out, file);
    std::printf("%-12s degree %5d  iterations %5ld  max node error %.3e  [%s]\n",
                part.label.c_str(), part.degree, part.iterations, part.max_node_error,
                part.converged ? "converged" : "FAILED");
    if (!plot.empty()) emit_plot_data(plot, spec, report);
    return part.converged ? 0 : kExitNonconverged;
}

int cmd_verify(const std::string& path, int samples) {
    qsp::PhaseFileV1 file;
    try {
        file = qsp::read_phase_file(path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }

    bool ok = !file.failed;
    for (const qsp::PhaseFilePart& part : file.parts) {
        const qsp::PhaseVector phases(part.phases);
        qsp::ChebSeries target;
        target.coeffs = part.target_coeffs;
        target.parity = part.parity;

        const qsp::NodeSet nodes = qsp::chebyshev_nodes(qsp::reduced_length(part.degree));
        double node_err = 0.0;
        for (double x : nodes.points) {
            node_err = std::max(node_err, std::abs(qsp::real_component(phases, x) -
                                                   qsp::clenshaw_eval(target, x)));
        }
        double sample_err = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double x = samples == 1 ? 0.0 : -1.0 + 2.0 * i / (samples - 1.0);
            sample_err = std::max(sample_err, std::abs(qsp::real_component(phases, x) -
                                                       qsp::clenshaw_eval(target, x)));
        }

        const bool reproduces = std::abs(node_err - part.max_node_error) <= 1e-14;
        ok = ok && reproduces && part.converged;
        std::printf("%-12s node error: stored %.6e recomputed %.6e  %s\n", part.label.c_str(),
                    part.max_node_error, node_err, reproduces ? "ok" : "MISMATCH");
        if (samples > 0) {
            std::printf("%-12s max error on %d uniform samples: %.6e\n", part.label.c_str(),
                        samples, sample_err);
        }
    }
    std::printf("verify: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QSP phase-factor solver"};
    app.require_subcommand(1);

    qsp::SolverConfig config;
    std::string out = "phases.json";
    std::string plot;
    double eps0 = 1e-14;

    auto add_common = [&](CLI::App* cmd, bool with_eps0) {
        cmd->add_option("--epsilon", config.epsilon, "stopping threshold on the max node error");
        cmd->add_option("--max-iter", config.max_iterations, "iteration cap");
        cmd->add_option("--lbfgs-memory", config.lbfgs_memory, "history pairs kept");
        cmd->add_option("--out", out, "output phase file");
        cmd->add_option("--emit-plot-data", plot, "prefix for (x, f_phi, f) tables");
        if (with_eps0) cmd->add_option("--eps0", eps0, "approximation accuracy");
    };

    double tau = 0.0;
    CLI::App* hamsim = app.add_subcommand("hamsim", "phases for e^{-i tau x}");
    hamsim->add_option("--tau", tau, "evolution time")->required();
    add_common(hamsim, true);

    int filter_k = 0;
    double filter_delta = 0.0;
    CLI::App* eigenfilter = app.add_subcommand("eigenfilter", "phases for the eigenstate filter");
    eigenfilter->add_option("--k", filter_k, "filter order")->required();
    eigenfilter->add_option("--delta", filter_delta, "spectral gap")->required();
    add_common(eigenfilter, false);

    double kappa = 0.0;
    std::string method = "trunc";
    CLI::App* matinv = app.add_subcommand("matinv", "phases for 1/x on [1/kappa, 1]");
    matinv->add_option("--kappa", kappa, "condition number")->required();
    matinv->add_option("--method", method, "trunc | remez-odd | remez-even")
        ->check(CLI::IsMember({"trunc", "remez-odd", "remez-even"}));
    add_common(matinv, true);

    std::string coeff_path, warm_path;
    int random_init = 0;
    unsigned seed = 0;
    CLI::App* solve = app.add_subcommand("solve", "phases for a coefficient file");
    solve->add_option("--coeffs", coeff_path, "input coefficient file")->required();
    solve->add_option("--warm-start", warm_path, "phase file to pad and reuse");
    solve->add_option("--random-init", random_init, "random restarts (landscape diagnostic)");
    solve->add_option("--seed", seed, "seed for --random-init");
    add_common(solve, false);

    std::string verify_path;
    int samples = 1000;
    CLI::App* verify = app.add_subcommand("verify", "re-check a phase file");
    verify->add_option("--file", verify_path, "phase file")->required();
    verify->add_option("--samples", samples, "uniform sample count (0: nodes only)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(hamsim)) {
            if (!(tau > 0.0)) {
                std::fprintf(stderr, "error: tau must be positive\n");
                return kExitInvalidTarget;
            }
            return cmd_hamsim(tau, eps0, config, out, plot);
        }
        if (app.got_subcommand(eigenfilter)) {
            return cmd_eigenfilter(filter_k, filter_delta, config, out, plot);
        }
        if (app.got_subcommand(matinv)) {
            return cmd_matinv(kappa, method, eps0, config, out, plot);
        }
        if (app.got_subcommand(solve)) {
            return cmd_solve(coeff_path, warm_path, random_init, seed, config, out, plot);
        }
        if (app.got_subcommand(verify)) {
            return cmd_verify(verify_path, samples);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidTarget;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return 0;
}
