#include "qsp/gslw.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDegree = 30;
constexpr double kSnapTol = 1e-12;
constexpr double kPairTol = 1e-10;

using cvector = std::vector<complexd>;

std::vector<double> cheb_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double v = 0.5 * a[i] * b[j];
            out[i + j] += v;
            out[i >= j ? i - j : j - i] += v;
        }
    }
    return out;
}

// Two-sided diagonal balancing (Parlett-Reinsch); the colleague matrix can
// carry huge last-row entries when the leading coefficient is small, and
// unbalanced QR loses several digits of the roots.
void balance_in_place(Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    bool converged = false;
    for (int pass = 0; pass < 50 && !converged; ++pass) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double c = a.col(i).lpNorm<1>() - std::abs(a(i, i));
            double r = a.row(i).lpNorm<1>() - std::abs(a(i, i));
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                converged = false;
                a.col(i) *= f;
                a.row(i) /= f;
            }
        }
    }
}

// Eigenvalues of the colleague (Chebyshev companion) matrix are the roots.
cvector chebyshev_roots(const std::vector<double>& coeffs) {
    int m = static_cast<int>(coeffs.size()) - 1;
    while (m > 0 && coeffs[m] == 0.0) --m;
    if (m < 1) return {};
    if (m == 1) return {complexd(-coeffs[0] / coeffs[1], 0.0)};

    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);
    mat(0, 1) = 1.0;
    for (int i = 1; i < m - 1; ++i) {
        mat(i, i - 1) = 0.5;
        mat(i, i + 1) = 0.5;
    }
    mat(m - 1, m - 2) += 0.5;
    for (int k = 0; k < m; ++k) mat(m - 1, k) -= coeffs[k] / (2.0 * coeffs[m]);
    balance_in_place(mat);

    Eigen::EigenSolver<Eigen::MatrixXd> es(mat, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("gslw: eigenvalue solve failed");
    cvector roots(m);
    for (int i = 0; i < m; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

struct RootClasses {
    int zero_count = 0;
    std::vector<double> unit_pairs;       // s in (0,1), stored once per +- pair
    std::vector<double> real_pairs;       // s >= 1
    std::vector<double> imag_pairs;       // |s| for s = i|s|
    std::vector<complexd> complex_quads;  // a + ib with a, b > 0
};

RootClasses classify_roots(cvector roots) {
    RootClasses cls;
    // Snap near-axis roots before pairing.
    for (complexd& r : roots) {
        if (std::abs(r.imag()) < kSnapTol) r = complexd(r.real(), 0.0);
        if (std::abs(r.real()) < kSnapTol) r = complexd(0.0, r.imag());
        if (r.imag() == 0.0 && std::abs(1.0 - std::abs(r.real())) < kSnapTol) {
            r = complexd(r.real() > 0 ? 1.0 : -1.0, 0.0);
        }
    }
    auto take_partner = [&](const complexd& want) {
        double best = kPairTol;
        std::size_t pos = roots.size();
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const double dist = std::abs(roots[i] - want);
            if (dist < best) {
                best = dist;
                pos = i;
            }
        }
        if (pos == roots.size()) {
            std::ostringstream msg;
            msg << "gslw: unpaired root, missing partner of (" << want.real() << ", "
                << want.imag() << ")";
            throw std::runtime_error(msg.str());
        }
        roots.erase(roots.begin() + pos);
    };

    while (!roots.empty()) {
        const complexd r = roots.front();
        roots.erase(roots.begin());
        if (std::abs(r) < kSnapTol) {
            ++cls.zero_count;
        } else if (r.imag() == 0.0) {
            take_partner(-r);
            const double s = std::abs(r.real());
            if (s >= 1.0) {
                cls.real_pairs.push_back(s);
            } else {
                cls.unit_pairs.push_back(s);
            }
        } else if (r.real() == 0.0) {
            take_partner(std::conj(r));
            cls.imag_pairs.push_back(std::abs(r.imag()));
        } else {
            take_partner(std::conj(r));
            take_partner(-r);
            take_partner(-std::conj(r));
            cls.complex_quads.emplace_back(std::abs(r.real()), std::abs(r.imag()));
        }
    }
    if (cls.zero_count % 2 != 0) throw std::runtime_error("gslw: odd multiplicity at x = 0");
    std::sort(cls.unit_pairs.begin(), cls.unit_pairs.end());
    return cls;
}

// Z evaluated on the circle with sqrt(1-x^2) continued as sin(theta).
complexd eval_z(const RootClasses& cls, double scale, double theta,
                const std::vector<std::pair<double, int>>& unit_groups) {
    const double c = std::cos(theta), s = std::sin(theta);
    complexd z{scale, 0.0};
    for (int i = 0; i < cls.zero_count / 2; ++i) z *= c;
    for (const auto& [u, half_mult] : unit_groups) {
        for (int i = 0; i < half_mult; ++i) z *= (c * c - u * u);
    }
    for (double r : cls.real_pairs) z *= complexd(std::sqrt(r * r - 1.0) * c, r * s);
    for (double t : cls.imag_pairs) z *= complexd(std::sqrt(t * t + 1.0) * c, t * s);
    for (const complexd& q : cls.complex_quads) {
        const double a = q.real(), b = q.imag();
        const double m2 = a * a + b * b;
        const double cc =
            m2 + std::sqrt(2.0 * (a * a + 1.0) * b * b + (a * a - 1.0) * (a * a - 1.0) +
                           b * b * b * b);
        z *= complexd(cc * c * c - m2, std::sqrt(cc * cc - 1.0) * c * s);
    }
    return z;
}

// Second-kind coefficients (gamma_k of R_k) to first kind.
std::vector<double> r_basis_to_t(const std::vector<double>& r) {
    std::vector<double> t(r.size(), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] == 0.0) continue;
        for (int j = static_cast<int>(k); j >= 0; j -= 2) {
            t[j] += (j == 0) ? r[k] : 2.0 * r[k];
        }
    }
    return t;
}

cvector t_basis_to_r(const cvector& t) {
    if (t.empty()) return {};
    cvector r(t.size(), 0.0);
    // T_0 = R_0, T_1 = R_1 / 2, T_j = (R_j - R_{j-2}) / 2.
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] == complexd{}) continue;
        if (j == 0) {
            r[0] += t[0];
        } else {
            r[j] += 0.5 * t[j];
            if (j >= 2) r[j - 2] -= 0.5 * t[j];
        }
    }
    return r;
}

double parity_mismatch(const std::vector<double>& coeffs, int parity_mod) {
    double wrong = 0.0, total = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        total = std::max(total, std::abs(coeffs[j]));
        if (static_cast<int>(j % 2) != parity_mod) wrong = std::max(wrong, std::abs(coeffs[j]));
    }
    return total == 0.0 ? 0.0 : wrong / total;
}

}  // namespace

ComplementarySet complementary_polynomials(const ChebSeries& f) {
    if (f.parity == Parity::none) throw std::invalid_argument("gslw: target needs definite parity");
    int n = f.degree();
    const int stated = static_cast<int>(f.coeffs.size()) - 1;
    if (n < 0) {
        // Zero target: P = i T_d with the parity-matched stated degree.
        n = stated - ((parity_of_degree(stated) == f.parity) ? 0 : 1);
        if (n < 0) throw std::invalid_argument("gslw: empty target");
        ComplementarySet out;
        out.real_target = f;
        out.imag_complement.coeffs.assign(n + 1, 0.0);
        out.imag_complement.coeffs[n] = 1.0;
        out.imag_complement.parity = f.parity;
        std::vector<double> c_r(n, 0.0);
        if (n >= 1) c_r[n - 1] = 1.0;
        out.q_complement.coeffs = r_basis_to_t(c_r);
        if (out.q_complement.coeffs.empty()) out.q_complement.coeffs = {0.0};
        out.q_complement.parity = parity_of_degree(n == 0 ? 1 : n - 1);
        return out;
    }
    if (n > kMaxDegree) throw std::invalid_argument("gslw: degree above the double-precision cap of 30");

    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000.0;
        if (std::abs(clenshaw_eval(f, x)) > 1.0 + 1e-12) {
            throw std::invalid_argument("gslw: |f| exceeds 1 on [-1, 1]");
        }
    }

    // A = 1 - f^2 in the Chebyshev basis.
    std::vector<double> fc(f.coeffs.begin(), f.coeffs.begin() + n + 1);
    std::vector<double> a = cheb_mul(fc, fc);
    for (double& v : a) v = -v;
    a[0] += 1.0;

    RootClasses cls = classify_roots(chebyshev_roots(a));

    // Tangency roots inside (0,1) must come in even multiplicity so their
    // product is a genuine real polynomial factor.
    std::vector<std::pair<double, int>> unit_groups;
    for (double s : cls.unit_pairs) {
        if (!unit_groups.empty() && std::abs(unit_groups.back().first - s) < kPairTol) {
            unit_groups.back().second++;
        } else {
            unit_groups.push_back({s, 1});
        }
    }
    for (auto& [s, mult] : unit_groups) {
        if (mult % 2 != 0) {
            std::ostringstream msg;
            msg << "gslw: unclassifiable odd-multiplicity root at x = " << s;
            throw std::runtime_error(msg.str());
        }
        mult /= 2;
    }

    // |Z|^2 must reproduce A, which pins the constant to sqrt of A's leading
    // monomial coefficient |a_{2n}| 2^{2n-1}.
    const double lead = std::abs(a[2 * n]) * std::pow(2.0, 2 * n - 1);
    const double scale = std::sqrt(lead);

    const int grid = 128;  // > 2 deg(Z) + 2, alias-free for degree <= 31
    cvector zvals(grid);
    for (int l = 0; l < grid; ++l) {
        zvals[l] = eval_z(cls, scale, 2.0 * kPi * l / grid, unit_groups);
    }
    auto dft_bin = [&](int k) {
        complexd acc{};
        for (int l = 0; l < grid; ++l) {
            const double ang = -2.0 * kPi * k * l / grid;
            acc += zvals[l] * complexd(std::cos(ang), std::sin(ang));
        }
        return acc / static_cast<double>(grid);
    };

    auto extract = [&](int shift, std::vector<double>& b_t, std::vector<double>& c_r) {
        b_t.assign(n + 2, 0.0);
        c_r.assign(n + 1, 0.0);
        for (int k = 0; k <= n + 1; ++k) {
            const complexd up = dft_bin(k - shift);
            const complexd um = dft_bin(-k - shift);
            const complexd b = (k == 0) ? up : up + um;
            const complexd c = up - um;
            b_t[k] = b.real();
            if (k >= 1) c_r[k - 1] = c.real();
        }
    };

    std::vector<double> b_t, c_r;
    extract(0, b_t, c_r);
    const int want_b = n % 2;
    if (parity_mismatch(b_t, want_b) > 1e-8) {
        extract(1, b_t, c_r);  // Z <- Z * (x + i sqrt(1-x^2))
        if (parity_mismatch(b_t, want_b) > 1e-8) {
            throw std::runtime_error("gslw: complementary polynomial parity fix failed");
        }
    }
    b_t.resize(n + 1);
    for (std::size_t j = want_b ^ 1; j < b_t.size(); j += 2) b_t[j] = 0.0;
    c_r.resize(std::max(n, 1));
    for (std::size_t j = (n >= 1 ? (n - 1) % 2 : 0) ^ 1; j < c_r.size(); j += 2) c_r[j] = 0.0;

    ComplementarySet out;
    out.real_target = f;
    out.imag_complement = ChebSeries(std::move(b_t), f.parity);
    out.q_complement = ChebSeries(r_basis_to_t(c_r), f.parity == Parity::even ? Parity::odd
                                                                              : Parity::even);

    // Classification errors show up here as a constraint violation.
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 2.0 * i / 200.0;
        const double fb = clenshaw_eval(out.real_target, x);
        const double bb = clenshaw_eval(out.imag_complement, x);
        const double cb = clenshaw_eval(out.q_complement, x);
        const double resid = std::abs(fb * fb + bb * bb + (1.0 - x * x) * cb * cb - 1.0);
        if (resid > 1e-6) {
            std::ostringstream msg;
            msg << "gslw: unitarity constraint residual " << resid << " at x = " << x;
            throw std::runtime_error(msg.str());
        }
    }
    return out;
}

PhaseVector reduce_to_phases(const ChebSeries& p_re, const ChebSeries& p_im,
                             const ChebSeries& q_re, const ChebSeries& q_im) {
    const int d = std::max(p_re.degree(), p_im.degree());
    if (d < 0) throw std::invalid_argument("gslw: zero P polynomial");
    if (d > kMaxDegree) throw std::invalid_argument("gslw: degree above the double-precision cap");

    cvector p(d + 1, complexd{});
    for (int j = 0; j <= d; ++j) {
        const double re = j < static_cast<int>(p_re.coeffs.size()) ? p_re.coeffs[j] : 0.0;
        const double im = j < static_cast<int>(p_im.coeffs.size()) ? p_im.coeffs[j] : 0.0;
        p[j] = complexd(re, im);
    }
    cvector q_t(std::max(d, 1), complexd{});
    for (std::size_t j = 0; j < q_t.size(); ++j) {
        const double re = j < q_re.coeffs.size() ? q_re.coeffs[j] : 0.0;
        const double im = j < q_im.coeffs.size() ? q_im.coeffs[j] : 0.0;
        q_t[j] = complexd(re, im);
    }
    cvector q = t_basis_to_r(q_t);
    q.resize(std::max(d, 1), complexd{});

    PhaseVector phi;
    phi.phases.assign(d + 1, 0.0);

    int t = d;
    for (; t >= 1; --t) {
        const complexd pt = p[t];
        const complexd qt = q[t - 1];
        const double scale = std::max(std::abs(pt), std::abs(qt));
        if (scale < 1e-12) break;  // degenerate early termination
        if (std::abs(std::abs(pt) - std::abs(qt)) > 1e-6 * scale) {
            std::ostringstream msg;
            msg << "gslw: top coefficient magnitude mismatch at step " << t << " (|p| = "
                << std::abs(pt) << ", |q| = " << std::abs(qt) << ")";
            throw std::runtime_error(msg.str());
        }
        const double phase = 0.5 * std::arg(pt / qt);
        phi[t] = phase;
        const complexd w = std::polar(1.0, 2.0 * phase);
        const complexd em = std::polar(1.0, -phase);

        // P_new = e^{-i phi} (x P + w (1 - x^2) Q), assembled in the T basis.
        cvector pn(t + 2, complexd{});
        for (int j = 0; j <= t; ++j) {
            if (j == 0) {
                pn[1] += p[0];
            } else {
                pn[j + 1] += 0.5 * p[j];
                pn[j - 1] += 0.5 * p[j];
            }
        }
        for (int j = 0; j <= t - 1; ++j) {
            pn[j] += 0.5 * w * q[j];
            pn[j + 2] -= 0.5 * w * q[j];
        }
        // Q_new = e^{-i phi} (w x Q - P), assembled in the R basis.
        cvector qn(t + 1, complexd{});
        for (int j = 0; j <= t - 1; ++j) {
            qn[j + 1] += 0.5 * w * q[j];
            if (j >= 1) qn[j - 1] += 0.5 * w * q[j];
        }
        for (int j = 0; j <= t; ++j) {
            if (j == 0) {
                qn[0] -= p[0];
            } else {
                qn[j] -= 0.5 * p[j];
                if (j >= 2) qn[j - 2] += 0.5 * p[j];
            }
        }
        for (auto& v : pn) v *= em;
        for (auto& v : qn) v *= em;

        p.assign(pn.begin(), pn.begin() + t);      // degree t-1
        q.assign(qn.begin(), qn.begin() + std::max(t - 1, 1));  // degree t-2
        if (t == 1) q.assign(1, complexd{});
    }

    if (t >= 1) {
        // Fill-in when the reduction terminated early on a degenerate top.
        for (int j = 1; j <= t; ++j) phi[j] = (j % 2 == 1) ? kPi / 2.0 : -kPi / 2.0;
    }
    complexd p_at_one{};
    for (const complexd& v : p) p_at_one += v;  // T_j(1) = 1
    phi[0] = std::arg(p_at_one);
    return phi;
}

SolveReport gslw_solve(const ChebSeries& f) {
    const auto t_start = std::chrono::steady_clock::now();
    const int d = f.degree();
    if (d < 0) throw std::invalid_argument("gslw: zero target");
    if (d > kMaxDegree) throw std::invalid_argument("gslw: degree above the double-precision cap of 30");
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000.0;
        if (std::abs(clenshaw_eval(f, x)) > 1.0 - 1e-4) {
            throw std::invalid_argument("gslw: target needs margin ||f|| <= 1 - 1e-4");
        }
    }

    const ComplementarySet comp = complementary_polynomials(f);
    ChebSeries zero;
    zero.coeffs.assign(1, 0.0);
    PhaseVector phi = reduce_to_phases(comp.real_target, comp.imag_complement, zero,
                                       comp.q_complement);

    SolveReport report;
    report.phases = canonicalized(phi);
    report.target_degree = d;
    report.scale_divisor = f.scale_divisor;
    report.iterations = 0;
    const NodeSet nodes = chebyshev_nodes(reduced_length(d));
    double sum_sq = 0.0, err = 0.0;
    for (double x : nodes.points) {
        const double r = real_component(report.phases, x) - clenshaw_eval(f, x);
        sum_sq += r * r;
        err = std::max(err, std::abs(r));
    }
    report.objective_value = sum_sq / (2.0 * nodes.count());
    report.max_node_error = err;
    report.status = SolveStatus::success;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace qsp
