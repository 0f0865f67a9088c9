#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsp/chebyshev.hpp"
#include "qsp/su2.hpp"

namespace qsp {

/// Symmetry-reduced phase vector: the first ceil((d+1)/2) entries of a
/// symmetric PhaseVector, together with the parent degree.
struct ReducedPhases {
    std::vector<double> values;
    int parent_degree = 0;

    std::size_t dtilde() const { return values.size(); }
};

inline int reduced_length(int degree) { return (degree + 2) / 2; }

/// First half of a symmetric phase vector; rejects asymmetric input.
ReducedPhases reduce_symmetric(const PhaseVector& phi, double tol = 1e-12);

/// Mirror expansion: duplicate the reversed list (d odd) or omit the
/// duplicated center (d even).  The result satisfies Phi = reverse(Phi)
/// exactly by construction.
PhaseVector expand_symmetric(const ReducedPhases& red);

/// The canonical starting point (pi/4, 0, ..., 0) of length ceil((d+1)/2).
ReducedPhases canonical_initial(int degree);

/// Diagonal of the inverse Hessian of the objective at the canonical start:
/// all 1/2 when d is odd, (1/2, ..., 1/2, 1) when d is even.  Constant in
/// the target polynomial.
std::vector<double> initial_inverse_hessian(int degree);

enum class SolveStatus { success, iteration_limit, line_search_stall, invalid_target };

const char* to_string(SolveStatus s);

struct SolverConfig {
    double epsilon = 1e-12;      ///< stop once max node error drops below this
    int max_iterations = 50000;
    int lbfgs_memory = 200;      ///< capped at dtilde internally
    double armijo_constant = 1e-4;
    double backtrack_factor = 0.5;
    double scale_margin_eta = 0.0;  ///< reject targets with ||f||_inf > 1 - eta
    /// Optional per-iteration observer (iteration, objective, max node error).
    std::function<void(int, double, double)> on_iteration;
};

struct SolveReport {
    PhaseVector phases;           ///< full symmetric vector, canonicalized
    double objective_value = 0.0;
    double max_node_error = 0.0;
    int iterations = 0;
    double wall_time_seconds = 0.0;
    double scale_divisor = 1.0;   ///< carried over from the target series
    int target_degree = 0;
    SolveStatus status = SolveStatus::success;
};

/// Mean-squared objective on the positive Chebyshev nodes,
///   L(red) = 1/(2 dtilde) sum_j (f_Phi(x_j) - f(x_j))^2,
/// with the gradient assembled by summing full-vector partials across
/// mirrored positions (center counted once when d is even).  Pass an empty
/// grad span to skip gradient work.  max_err_out, when non-null, receives
/// max_j |f_Phi(x_j) - f(x_j)|.
double objective(const ReducedPhases& red, const ChebSeries& target, const NodeSet& nodes,
                 std::span<double> grad = {}, double* max_err_out = nullptr);

/// L-BFGS (two-loop recursion seeded with the constant inverse Hessian,
/// backtracking line search) on the reduced phases.  Terminates on the
/// max-node-error criterion, not the objective value.
SolveReport lbfgs_solve(const ChebSeries& target, const SolverConfig& config,
                        const ReducedPhases& initial);

/// Convenience: solve from the canonical starting point.
SolveReport lbfgs_solve(const ChebSeries& target, const SolverConfig& config = {});

struct PartSolve {
    std::string label;  ///< "real-even", "real-odd", "imag-even", "imag-odd"
    ChebSeries target;
    SolveReport report;
};

/// Decompose F/alpha into real/imaginary x even/odd polynomial parts of the
/// given degree, then solve each nontrivial part from the canonical start.
std::vector<PartSolve> solve_function(const std::function<complexd(double)>& F, int degree,
                                      double alpha, const SolverConfig& config = {});

/// Solve prebuilt, already-scaled part series.
std::vector<PartSolve> solve_parts(const std::vector<std::pair<std::string, ChebSeries>>& parts,
                                   const SolverConfig& config = {});

/// Central finite-difference Hessian of the objective; dense, so restricted
/// to dtilde <= 400.
std::vector<std::vector<double>> fd_hessian(const ReducedPhases& red, const ChebSeries& target,
                                            double step = 1e-4);

/// Condition number (|lambda|_max / |lambda|_min) of the finite-difference
/// Hessian at the given point; the sensitivity diagnostic.
double hessian_condition_number(const ReducedPhases& red, const ChebSeries& target,
                                double step = 1e-4);

}  // namespace qsp
