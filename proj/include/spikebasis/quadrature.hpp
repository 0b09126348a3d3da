#pragma once

#include <cmath>
#include <stdexcept>

namespace spikebasis {

namespace detail {

template <typename F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double sum = left + right;
    if (depth <= 0 || std::abs(sum - whole) <= 15.0 * eps)
        return sum + (sum - whole) / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance; depth-capped so a
/// pathological integrand terminates with the best refinement reached.
template <typename F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tolerance must be positive");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace spikebasis
