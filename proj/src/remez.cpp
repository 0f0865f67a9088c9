#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qsp/approx.hpp"

namespace qsp {

namespace {

struct Segment {
    double lo, hi;
};

Segment segment_of(const std::vector<Segment>& segs, double x) {
    for (const Segment& s : segs) {
        if (x >= s.lo - 1e-15 && x <= s.hi + 1e-15) return s;
    }
    return segs.front();
}

// Clenshaw without the [-1, 1] guard; the mapped argument legitimately
// leaves the unit interval when the approximant is evaluated off-segment.
double clenshaw_unchecked(const std::vector<double>& c, double t) {
    double b1 = 0.0, b2 = 0.0;
    const double two_t = 2.0 * t;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = c[j] + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c.empty() ? 0.0 : c[0] + t * b1 - b2;
}

// The odd and even spans {T_1, T_3, ...} and {T_0, T_2, ...} restricted to a
// sub-interval give exponentially ill-conditioned reference systems, so the
// solve runs in the equivalent forms x q(x^2) and q(x^2) with q Chebyshev in
// the affinely mapped variable; the result is converted back to global
// first-kind coefficients afterwards.
struct SolveBasis {
    RemezBasis::Kind kind;
    int count;
    double map_lo, map_hi;

    double mapped(double x) const {
        const double y = (kind == RemezBasis::Kind::full) ? x : x * x;
        return (2.0 * y - map_lo - map_hi) / (map_hi - map_lo);
    }

    void row(double x, double* out) const {
        const double t = mapped(x);
        double t0 = 1.0, t1 = t;
        const double w = (kind == RemezBasis::Kind::odd_chebyshev) ? x : 1.0;
        for (int j = 0; j < count; ++j) {
            double tj;
            if (j == 0) {
                tj = t0;
            } else if (j == 1) {
                tj = t1;
            } else {
                tj = 2.0 * t * t1 - t0;
                t0 = t1;
                t1 = tj;
            }
            out[j] = w * tj;
        }
    }

    double eval(const std::vector<double>& q, double x) const {
        const double w = (kind == RemezBasis::Kind::odd_chebyshev) ? x : 1.0;
        return w * clenshaw_unchecked(q, mapped(x));
    }

    int degree() const {
        switch (kind) {
            case RemezBasis::Kind::odd_chebyshev: return 2 * count - 1;
            case RemezBasis::Kind::even_chebyshev: return 2 * count - 2;
            default: return count - 1;
        }
    }
};

}  // namespace

IntervalSpec::IntervalSpec(std::vector<std::pair<double, double>> segs) : segments(std::move(segs)) {
    if (segments.empty()) throw std::invalid_argument("remez: empty interval");
    std::sort(segments.begin(), segments.end());
    double prev = -2.0;
    for (auto& [a, b] : segments) {
        if (!(a < b)) throw std::invalid_argument("remez: segment must have positive length");
        if (a < -1.0 || b > 1.0) throw std::invalid_argument("remez: segment outside [-1, 1]");
        if (a <= prev) throw std::invalid_argument("remez: segments must be disjoint");
        prev = b;
    }
}

RemezResult remez_minimax(const std::function<double(double)>& F, const RemezBasis& basis,
                          const IntervalSpec& interval, double tol, int max_iterations,
                          const std::function<double(double)>& weight) {
    const int n = basis.count;
    if (n < 1) throw std::invalid_argument("remez: basis count must be positive");
    auto w = [&](double x) { return weight ? weight(x) : 1.0; };
    if (basis.kind != RemezBasis::Kind::full) {
        for (auto& [a, b] : interval.segments) {
            if (a <= 0.0) {
                throw std::invalid_argument("remez: parity basis needs segments within (0, 1]");
            }
        }
    }

    std::vector<Segment> segs;
    for (auto& [a, b] : interval.segments) segs.push_back({a, b});

    SolveBasis sb;
    sb.kind = basis.kind;
    sb.count = n;
    if (basis.kind == RemezBasis::Kind::full) {
        sb.map_lo = segs.front().lo;
        sb.map_hi = segs.back().hi;
    } else {
        sb.map_lo = segs.front().lo * segs.front().lo;
        sb.map_hi = segs.back().hi * segs.back().hi;
    }

    // Dense search grid, 20 N points per segment.
    std::vector<double> grid;
    for (const Segment& s : segs) {
        const int m = std::max(20 * n, 32);
        for (int i = 0; i <= m; ++i) grid.push_back(s.lo + (s.hi - s.lo) * i / m);
    }

    double fscale = 0.0;
    for (double x : grid) fscale = std::max(fscale, std::abs(w(x) * F(x)));
    if (fscale == 0.0) fscale = 1.0;

    // Initial reference: Chebyshev points of each segment, counts split by
    // segment length.
    std::vector<double> refs;
    {
        const int total = n + 1;
        if (total < static_cast<int>(segs.size())) {
            throw std::invalid_argument("remez: more segments than reference points");
        }
        double length = 0.0;
        for (const Segment& s : segs) length += s.hi - s.lo;
        int assigned = 0;
        for (std::size_t si = 0; si < segs.size(); ++si) {
            int count = (si + 1 == segs.size())
                            ? total - assigned
                            : std::max(1, static_cast<int>(std::lround(
                                              total * (segs[si].hi - segs[si].lo) / length)));
            count = std::min(count, total - assigned - static_cast<int>(segs.size() - si - 1));
            assigned += count;
            // Chebyshev spacing in the solve variable; for the parity kinds
            // that is x^2, which keeps the reference system well conditioned
            // where plain x-spacing clusters badly after the mapping.
            const bool squared = basis.kind != RemezBasis::Kind::full;
            const double lo = squared ? segs[si].lo * segs[si].lo : segs[si].lo;
            const double hi = squared ? segs[si].hi * segs[si].hi : segs[si].hi;
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            for (int k = 0; k < count; ++k) {
                const double t = (count == 1) ? 0.0 : std::cos(std::numbers::pi * k / (count - 1));
                const double v = mid - half * t;
                refs.push_back(squared ? std::sqrt(v) : v);
            }
        }
        std::sort(refs.begin(), refs.end());
    }

    RemezResult best;
    std::vector<double> best_q;
    double best_rnorm = std::numeric_limits<double>::infinity();
    int stale = 0;

    RemezResult current;
    std::vector<double> rowbuf(n);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        // Solve sum_j a_j g_j(x_k) - F(x_k) = (-1)^k Delta / w(x_k) on the
        // reference, so the weighted residual levels at +-Delta.
        Eigen::MatrixXd mat(n + 1, n + 1);
        Eigen::VectorXd rhs(n + 1);
        for (int k = 0; k <= n; ++k) {
            sb.row(refs[k], rowbuf.data());
            for (int j = 0; j < n; ++j) mat(k, j) = rowbuf[j];
            mat(k, n) = ((k % 2 == 0) ? -1.0 : 1.0) / w(refs[k]);
            rhs(k) = F(refs[k]);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mat);
        const Eigen::VectorXd sol = qr.solve(rhs);
        const double resid = (mat * sol - rhs).cwiseAbs().maxCoeff();
        if (!sol.allFinite() ||
            resid > 1e-7 * (rhs.cwiseAbs().maxCoeff() + sol.cwiseAbs().maxCoeff() + 1.0)) {
            throw std::runtime_error("remez: singular reference system (Haar condition violated)");
        }
        const double delta = sol(n);
        std::vector<double> q(sol.data(), sol.data() + n);

        auto residual = [&](double x) { return w(x) * (F(x) - sb.eval(q, x)); };

        // Expected residual signs on the reference follow the solve.
        auto sigma = [&](int k) { return ((k % 2 == 0) ? -1.0 : 1.0) * (delta >= 0 ? 1.0 : -1.0); };

        // Roots bracketing the extrema.
        std::vector<double> z(n + 2);
        z[0] = segs.front().lo;
        z[n + 1] = segs.back().hi;
        for (int j = 1; j <= n; ++j) {
            double lo = refs[j - 1], hi = refs[j];
            const Segment sl = segment_of(segs, lo), sh = segment_of(segs, hi);
            if (sl.hi < sh.lo - 1e-15) {
                z[j] = sl.hi;  // references straddle a gap
                continue;
            }
            double rl = residual(lo), rh = residual(hi);
            if (rl == 0.0 || rh == 0.0 || (rl > 0) == (rh > 0)) {
                z[j] = 0.5 * (lo + hi);
                continue;
            }
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double rm = residual(mid);
                if ((rm > 0) == (rl > 0)) {
                    lo = mid;
                    rl = rm;
                } else {
                    hi = mid;
                }
            }
            z[j] = 0.5 * (lo + hi);
        }

        // Locate the alternating extrema: dense-grid argmax per bracket, then
        // a few Newton refinements on r'.
        std::vector<double> ys(n + 1), yr(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double sgn = sigma(j);
            double ybest = refs[j];
            double vbest = sgn * residual(ybest);
            for (double x : grid) {
                if (x < z[j] - 1e-15 || x > z[j + 1] + 1e-15) continue;
                const double v = sgn * residual(x);
                if (v > vbest) {
                    vbest = v;
                    ybest = x;
                }
            }
            const Segment seg = segment_of(segs, ybest);
            const double blo = std::max(z[j], seg.lo), bhi = std::min(z[j + 1], seg.hi);
            const double h = std::max(1e-7 * (seg.hi - seg.lo), 1e-12);
            double y = ybest;
            for (int it = 0; it < 3; ++it) {
                if (y - h < blo || y + h > bhi) break;  // stencil must stay inside
                const double rp = residual(y + h), rm = residual(y - h), rc = residual(y);
                const double d1 = (rp - rm) / (2.0 * h);
                const double d2 = (rp - 2.0 * rc + rm) / (h * h);
                if (!(sgn * d2 < 0.0)) break;
                double ynew = y - d1 / d2;
                ynew = std::clamp(ynew, blo + h, bhi - h);
                if (sgn * residual(ynew) <= sgn * residual(y)) break;
                y = ynew;
            }
            if (sgn * residual(y) > vbest) ybest = y;
            ys[j] = ybest;
            yr[j] = residual(ybest);
        }

        // Global maximum over the grid; single-point safeguard when it
        // escaped every bracket.
        double rnorm = 0.0;
        double ystar = ys[0];
        for (double x : grid) {
            const double v = std::abs(residual(x));
            if (v > rnorm) {
                rnorm = v;
                ystar = x;
            }
        }
        double ymax = 0.0;
        for (int j = 0; j <= n; ++j) ymax = std::max(ymax, std::abs(yr[j]));
        if (rnorm > ymax * (1.0 + 1e-12) && rnorm > 1e-15 * fscale) {
            const double rs = residual(ystar);
            if (ystar < ys[0]) {
                if ((rs > 0) == (yr[0] > 0)) {
                    ys[0] = ystar;
                    yr[0] = rs;
                } else {
                    for (int j = n; j >= 1; --j) {
                        ys[j] = ys[j - 1];
                        yr[j] = yr[j - 1];
                    }
                    ys[0] = ystar;
                    yr[0] = rs;
                }
            } else if (ystar > ys[n]) {
                if ((rs > 0) == (yr[n] > 0)) {
                    ys[n] = ystar;
                    yr[n] = rs;
                } else {
                    for (int j = 0; j < n; ++j) {
                        ys[j] = ys[j + 1];
                        yr[j] = yr[j + 1];
                    }
                    ys[n] = ystar;
                    yr[n] = rs;
                }
            } else {
                for (int j = 0; j <= n; ++j) {
                    if (ystar <= ys[j] || (j < n && ystar >= ys[j + 1])) continue;
                    if ((rs > 0) == (yr[j] > 0)) {
                        ys[j] = ystar;
                        yr[j] = rs;
                    } else if (j < n) {
                        ys[j + 1] = ystar;
                        yr[j + 1] = rs;
                    }
                    break;
                }
            }
        }
        rnorm = std::max(rnorm, ymax);

        // Collapsed brackets occasionally produce coincident extrema early
        // on; keep the previous reference there so the system stays regular.
        for (int j = 1; j <= n; ++j) {
            if (ys[j] <= ys[j - 1] + 1e-15) ys[j] = std::max(refs[j], ys[j - 1] + 1e-14);
        }

        current.iterations = iter;
        current.achieved_error = rnorm;
        current.history.emplace_back(std::abs(delta), rnorm);
        current.reference_points = ys;
        current.reference_residuals = yr;

        const bool improved = rnorm < best_rnorm * (1.0 - 1e-3);
        stale = improved ? 0 : stale + 1;

        const bool exact = rnorm <= 1e-15 * fscale;
        const bool levelled = rnorm - std::abs(delta) <= tol * rnorm;
        const bool flooring = stale >= 12;

        auto finalize = [&](const std::vector<double>& qq) {
            const Parity parity = basis.kind == RemezBasis::Kind::odd_chebyshev
                                      ? Parity::odd
                                      : (basis.kind == RemezBasis::Kind::even_chebyshev
                                             ? Parity::even
                                             : Parity::none);
            RemezResult out = current;
            out.history = current.history;
            out.series = coeffs_from_function([&](double x) { return sb.eval(qq, x); },
                                              sb.degree(),
                                              default_quadrature_points(sb.degree()), parity);
            return out;
        };

        if (exact || levelled) return finalize(q);
        if (rnorm < best_rnorm) {
            best_rnorm = rnorm;
            best = current;
            best_q = q;
        }
        if (flooring) {  // noise floor: settle for the best visited state
            RemezResult out = finalize(best_q);
            out.achieved_error = best.achieved_error;
            out.reference_points = best.reference_points;
            out.reference_residuals = best.reference_residuals;
            return out;
        }

        refs = ys;
        std::sort(refs.begin(), refs.end());
    }
    throw std::runtime_error("remez: no convergence within iteration budget");
}

RemezSearchResult remez_minimal_basis(const std::function<double(double)>& F,
                                      RemezBasis::Kind kind, const IntervalSpec& interval,
                                      double eps0, double tol,
                                      const std::function<double(double)>& weight) {
    auto error_at = [&](int count) {
        return remez_minimax(F, RemezBasis{kind, count}, interval, tol, 100, weight);
    };

    int lo = 1;
    RemezResult lo_result = error_at(lo);
    if (lo_result.achieved_error <= eps0) return {lo, std::move(lo_result)};

    int hi = 2;
    RemezResult hi_result = error_at(hi);
    while (hi_result.achieved_error > eps0) {
        lo = hi;
        hi *= 2;
        if (hi > 4096) throw std::runtime_error("remez: tolerance unreachable");
        hi_result = error_at(hi);
    }
    // Bisect on the monotone achieved error.
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        RemezResult mid_result = error_at(mid);
        if (mid_result.achieved_error <= eps0) {
            hi = mid;
            hi_result = std::move(mid_result);
        } else {
            lo = mid;
        }
    }
    return {hi, std::move(hi_result)};
}

RemezSearchResult remez_inverse(double kappa, double eps0, RemezBasis::Kind kind) {
    if (!(kappa >= 2.0)) throw std::invalid_argument("remez_inverse: kappa must be >= 2");
    if (kind == RemezBasis::Kind::full) {
        throw std::invalid_argument("remez_inverse: use an odd or even basis");
    }
    return remez_minimal_basis([](double x) { return 1.0 / x; }, kind,
                               IntervalSpec(1.0 / kappa, 1.0), eps0, 1e-2,
                               [](double x) { return x * x; });
}

}  // namespace qsp
