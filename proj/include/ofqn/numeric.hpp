#pragma once

// Independent numerical checks used to cross-examine the closed forms:
// adaptive Simpson quadrature and the Kolmogorov-Smirnov distance.

#include <cmath>
#include <cstddef>
#include <span>

namespace ofqn::numeric {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson with Richardson correction; `tol` is absolute. The range
/// is first cut into `panels` pieces so narrow peaks are not stepped over.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int panels = 64, int max_depth = 40) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + h * i;
        const double hi = i + 1 == panels ? b : lo + h;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        sum += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, max_depth);
    }
    return sum;
}

/// Sum of adaptive_simpson over consecutive breakpoints; use breakpoints at
/// the natural time scales of an integrand with well-separated rates.
template <class F>
double adaptive_simpson_pieces(const F& f, std::span<const double> breakpoints, double tol) {
    double sum = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (breakpoints[i] > breakpoints[i - 1]) sum += adaptive_simpson(f, breakpoints[i - 1], breakpoints[i], tol);
    return sum;
}

/// sup |F_n - F| for sorted samples against a continuous CDF.
template <class Cdf>
double ks_distance(std::span<const double> sorted, const Cdf& cdf) {
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace ofqn::numeric
