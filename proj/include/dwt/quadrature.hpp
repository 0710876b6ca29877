#pragma once

#include "dwt/algebra.hpp"
#include "dwt/errors.hpp"

#include <vector>

namespace dwt {

inline double qnorm(double v) { return std::abs(v); }
inline double qnorm(cplx v) { return std::abs(v); }
inline double qnorm(const Vec2& v) { return norm_max(v); }
inline double qnorm(const Mat2& v) { return norm_max(v); }

namespace detail {

template <class T, class F>
T simpson_step(F& f, double a, double b, const T& fa, const T& fm, const T& fb, const T& whole, double tol,
               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    const T left = (fa + 4.0 * flm + fm) * ((m - a) / 6.0);
    const T right = (fm + 4.0 * frm + fb) * ((b - m) / 6.0);
    const T both = left + right;
    const T delta = both - whole;
    // Second test stops refinement once the panel is resolved to roundoff.
    if (qnorm(delta) <= 15.0 * tol || qnorm(delta) <= 1e-14 * qnorm(both)) return both + delta * (1.0 / 15.0);
    if (depth <= 0) throw Error(ErrorKind::NonConvergence, "adaptive Simpson exceeded its depth limit");
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; tol is absolute on [a,b].
template <class T, class F>
T adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return f(a) * 0.0;
    const double m = 0.5 * (a + b);
    const T fa = f(a), fm = f(m), fb = f(b);
    const T whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
    return detail::simpson_step<T>(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Composite 20-point Gauss-Legendre over equal panels of [a,b].
QuadRule gauss_legendre(double a, double b, int panels);
/// Composite rule over the given sorted cut points.
QuadRule gauss_legendre(const std::vector<double>& cuts, int panels_per_piece);

template <class T, class F>
T integrate(const QuadRule& r, F&& f) {
    T acc = f(r.x.front()) * 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += f(r.x[i]) * r.w[i];
    return acc;
}

}  // namespace dwt
