#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsp/approx.hpp"
#include "qsp/chebyshev.hpp"
#include "qsp/gslw.hpp"
#include "qsp/optimizer.hpp"
#include "qsp/padding.hpp"
#include "qsp/su2.hpp"

namespace py = pybind11;
using namespace qsp;

namespace {

RemezBasis::Kind kind_from_string(const std::string& s) {
    if (s == "odd") return RemezBasis::Kind::odd_chebyshev;
    if (s == "even") return RemezBasis::Kind::even_chebyshev;
    if (s == "full") return RemezBasis::Kind::full;
    throw std::invalid_argument("basis kind must be 'odd', 'even' or 'full'");
}

SolverConfig config_from(double epsilon, int max_iterations, int lbfgs_memory) {
    SolverConfig config;
    config.epsilon = epsilon;
    config.max_iterations = max_iterations;
    config.lbfgs_memory = lbfgs_memory;
    return config;
}

}  // namespace

PYBIND11_MODULE(_qspphase, m) {
    m.doc() = "Phase factors for quantum signal processing circuits";

    py::class_<ChebSeries>(m, "ChebSeries")
        .def(py::init([](std::vector<double> coeffs, const std::string& parity) {
                 ChebSeries s(std::move(coeffs));
                 const Parity p = parity_from_string(parity);
                 return (p == Parity::none) ? s : with_parity(std::move(s), p);
             }),
             py::arg("coeffs"), py::arg("parity") = "none")
        .def_readwrite("coeffs", &ChebSeries::coeffs)
        .def_property_readonly("parity",
                               [](const ChebSeries& s) { return std::string(to_string(s.parity)); })
        .def_readwrite("scale_divisor", &ChebSeries::scale_divisor)
        .def("degree", &ChebSeries::degree)
        .def("__call__", [](const ChebSeries& s, double x) { return clenshaw_eval(s, x); });

    py::class_<SolveReport>(m, "SolveReport")
        .def_property_readonly("phases",
                               [](const SolveReport& r) { return r.phases.phases; })
        .def_readonly("objective_value", &SolveReport::objective_value)
        .def_readonly("max_node_error", &SolveReport::max_node_error)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("wall_time_seconds", &SolveReport::wall_time_seconds)
        .def_readonly("scale_divisor", &SolveReport::scale_divisor)
        .def_readonly("target_degree", &SolveReport::target_degree)
        .def_property_readonly("status",
                               [](const SolveReport& r) { return std::string(to_string(r.status)); })
        .def_property_readonly("converged",
                               [](const SolveReport& r) { return r.status == SolveStatus::success; });

    m.def(
        "solve",
        [](const ChebSeries& target, double epsilon, int max_iterations, int lbfgs_memory,
           const std::optional<std::vector<double>>& initial) {
            const SolverConfig config = config_from(epsilon, max_iterations, lbfgs_memory);
            if (!initial) return lbfgs_solve(target, config);
            ReducedPhases start;
            start.parent_degree = target.degree();
            start.values = *initial;
            return lbfgs_solve(target, config, start);
        },
        py::arg("target"), py::arg("epsilon") = 1e-12, py::arg("max_iterations") = 50000,
        py::arg("lbfgs_memory") = 200, py::arg("initial") = std::nullopt,
        "Find symmetric phase factors for a Chebyshev target polynomial");

    m.def("gslw_solve", &gslw_solve, py::arg("target"),
          "Direct (root-finding) solver for low degrees; an independent oracle");

    m.def(
        "qsp_eval",
        [](const std::vector<double>& phases, const std::vector<double>& xs) {
            const PhaseVector phi(phases);
            std::vector<double> out(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) out[i] = real_component(phi, xs[i]);
            return out;
        },
        py::arg("phases"), py::arg("xs"), "Re <0|U_Phi(x)|0> at each sample point");

    m.def(
        "qsp_unitary",
        [](const std::vector<double>& phases, double x) {
            const Su2Matrix u = qsp_unitary(PhaseVector(phases), x);
            return std::vector<std::vector<complexd>>{{u.m00, u.m01}, {u.m10, u.m11}};
        },
        py::arg("phases"), py::arg("x"));

    m.def(
        "value_and_gradient",
        [](const std::vector<double>& phases, double x) {
            const PhaseVector phi(phases);
            std::vector<double> grad(phi.size());
            const double f = value_and_gradient(phi, x, grad);
            return py::make_tuple(f, grad);
        },
        py::arg("phases"), py::arg("x"));

    m.def("negate_phases",
          [](const std::vector<double>& p) { return negate_phases(PhaseVector(p)).phases; });
    m.def("invert_phases",
          [](const std::vector<double>& p) { return invert_phases(PhaseVector(p)).phases; });
    m.def(
        "to_circuit_phases",
        [](const std::vector<double>& p, bool negated) {
            return to_circuit_phases(PhaseVector(p), negated).phases;
        },
        py::arg("phases"), py::arg("negated") = false);

    m.def("chebyshev_nodes",
          [](int dtilde) { return chebyshev_nodes(dtilde).points; });
    m.def("clenshaw_eval", &clenshaw_eval, py::arg("series"), py::arg("x"));
    m.def(
        "coeffs_from_function",
        [](const std::function<double(double)>& f, int degree, std::optional<int> quad_points,
           const std::string& parity) {
            const int K = quad_points.value_or(default_quadrature_points(degree));
            return coeffs_from_function(f, degree, K, parity_from_string(parity));
        },
        py::arg("f"), py::arg("degree"), py::arg("quad_points") = std::nullopt,
        py::arg("parity") = "none");
    m.def("coeffs_of_qsp",
          [](const std::vector<double>& p) { return coeffs_of_qsp(PhaseVector(p)); });
    m.def("coefficient_gap", &coefficient_gap, py::arg("a"), py::arg("b"));

    m.def("bessel_j", &bessel_j, py::arg("order"), py::arg("argument"));
    m.def(
        "jacobi_anger",
        [](double tau, double eps0) {
            const JacobiAngerParts p = jacobi_anger(tau, eps0);
            return py::make_tuple(p.even_part, p.odd_part, p.degree);
        },
        py::arg("tau"), py::arg("eps0") = 1e-14,
        "(even cos series, odd -sin series, degree), both unscaled");
    m.def("eigenstate_filter", &eigenstate_filter, py::arg("k"), py::arg("delta"));
    m.def("inverse_truncation", &inverse_truncation, py::arg("kappa"), py::arg("eps0") = 1e-14);
    m.def("scale_series", &scale_series, py::arg("series"), py::arg("divisor"));

    m.def(
        "remez_minimax",
        [](const std::function<double(double)>& f, const std::string& kind, int count,
           const std::vector<std::pair<double, double>>& segments, double tol) {
            const RemezResult r = remez_minimax(f, RemezBasis{kind_from_string(kind), count},
                                                IntervalSpec(segments), tol);
            return py::make_tuple(r.series, r.achieved_error, r.iterations);
        },
        py::arg("f"), py::arg("kind"), py::arg("count"), py::arg("segments"),
        py::arg("tol") = 1e-2);
    m.def(
        "remez_inverse",
        [](double kappa, double eps0, const std::string& kind) {
            const RemezSearchResult r = remez_inverse(kappa, eps0, kind_from_string(kind));
            return py::make_tuple(r.result.series, r.result.series.degree(),
                                  r.result.achieved_error);
        },
        py::arg("kappa"), py::arg("eps0"), py::arg("kind"),
        "Smallest-degree minimax approximation of 1/x under the x^2 weight");

    m.def(
        "pad_phases",
        [](const std::vector<double>& p, int l) {
            return pad_phases(PhaseVector(p), l).phases.phases;
        },
        py::arg("phases"), py::arg("l"));
    m.def("g_phi_series",
          [](const std::vector<double>& p) { return g_phi_series(PhaseVector(p)); });
    m.def("decay_estimate_phases",
          [](const ChebSeries& s) { return decay_estimate_phases(s).phases; });
    m.def("canonical_initial",
          [](int degree) { return canonical_initial(degree).values; });

    m.attr("__version__") = "1.0.0";
}
