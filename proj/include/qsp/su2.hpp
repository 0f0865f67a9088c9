#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qsp {

using complexd = std::complex<double>;

/// 2x2 special-unitary matrix stored as four complex entries.
/// Products of exactly unitary factors stay unitary to machine precision,
/// so no renormalization is performed anywhere.
struct Su2Matrix {
    complexd m00{1.0, 0.0};
    complexd m01{0.0, 0.0};
    complexd m10{0.0, 0.0};
    complexd m11{1.0, 0.0};

    Su2Matrix operator*(const Su2Matrix& rhs) const {
        return {m00 * rhs.m00 + m01 * rhs.m10, m00 * rhs.m01 + m01 * rhs.m11,
                m10 * rhs.m00 + m11 * rhs.m10, m10 * rhs.m01 + m11 * rhs.m11};
    }

    complexd det() const { return m00 * m11 - m01 * m10; }

    /// max entrywise deviation of U^dagger U from the identity
    double unitarity_defect() const;
};

/// Rotation angles (phi_0, ..., phi_d) defining a QSP product of degree d.
struct PhaseVector {
    std::vector<double> phases;

    PhaseVector() = default;
    explicit PhaseVector(std::vector<double> p) : phases(std::move(p)) {}

    std::size_t size() const { return phases.size(); }
    int degree() const { return static_cast<int>(phases.size()) - 1; }
    double operator[](std::size_t i) const { return phases[i]; }
    double& operator[](std::size_t i) { return phases[i]; }

    bool is_symmetric(double tol = 1e-12) const;
};

/// Wrap every angle into [-pi, pi). Applied at I/O boundaries only; the
/// optimizer works on unwrapped values to keep line searches continuous.
PhaseVector canonicalized(const PhaseVector& phi);

/// W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]].
/// |x| may overshoot 1 by at most 1e-14 (cosine-generated nodes); anything
/// beyond that is a domain error.
Su2Matrix wx_matrix(double x);

/// U_Phi(x) = e^{i phi_0 sigma_z} prod_j [ W(x) e^{i phi_j sigma_z} ]
Su2Matrix qsp_unitary(const PhaseVector& phi, double x);

/// Re <0| U_Phi(x) |0>, the scalar component the solver targets.
double real_component(const PhaseVector& phi, double x);

/// Scratch buffers for value_and_gradient so hot loops avoid reallocation.
struct GradientWorkspace {
    std::vector<Su2Matrix> prefix;
};

/// Returns f_Phi(x) and writes df/dphi_j into grad (size d+1).
/// One forward pass stores prefix products, one backward pass runs suffix
/// products, so the cost is O(d) per sample point.
double value_and_gradient(const PhaseVector& phi, double x, std::span<double> grad,
                          GradientWorkspace& ws);
double value_and_gradient(const PhaseVector& phi, double x, std::span<double> grad);

/// Phases of the conjugated product U_{-Phi} = U_Phi^*:
/// (-phi_0 + pi/2, -phi_1, ..., -phi_{d-1}, -phi_d - pi/2).
/// Preserves the real component and negates the imaginary part.
PhaseVector negate_phases(const PhaseVector& phi);

/// Reversed phase list; realizes the transpose of the QSP unitary.
PhaseVector invert_phases(const PhaseVector& phi);

/// Offset map from the SU(2) convention to circuit rotation angles:
/// +pi/4 at both ends, +pi/2 in the interior.  With negated=true, returns
/// the circuit angles realizing U_{-Phi}: (-phi_0 + 3pi/4, -phi_i + pi/2,
/// -phi_d - pi/4).  No wrapping is applied, so the inverse offset map
/// recovers the input exactly.
PhaseVector to_circuit_phases(const PhaseVector& phi, bool negated = false);

}  // namespace qsp
