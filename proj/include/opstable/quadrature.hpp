#pragma once

#include <cmath>
#include <complex>

#include "opstable/errors.hpp"

namespace opstable {

namespace detail {
inline double quad_mag(double x) { return std::abs(x); }
inline double quad_mag(const std::complex<double>& x) { return std::abs(x); }
} // namespace detail

/// Adaptive Simpson quadrature on [a, b] for double- or complex-valued
/// integrands. Relative tolerance with an absolute floor; recursion depth
/// capped at max_depth (throws NumericError when exhausted). min_depth
/// forces subdivision before acceptance, guarding oscillatory integrands
/// against aliasing on coarse panels.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-9,
                      double abs_floor = 1e-300, int max_depth = 48, int min_depth = 0) {
    using R = decltype(f(a));
    struct Impl {
        F& f;
        double rel_tol, abs_floor;
        int max_depth, min_depth;
        double scale = 0.0;

        R recurse(double a, double m, double b, R fa, R fm, R fb, R whole, int depth) {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const R flm = f(lm), frm = f(rm);
            const R left = (fa + 4.0 * flm + fm) * ((m - a) / 6.0);
            const R right = (fm + 4.0 * frm + fb) * ((b - m) / 6.0);
            const R sum = left + right;
            const double err = detail::quad_mag(sum - whole);
            const double tol = std::max(rel_tol * std::max(scale, detail::quad_mag(sum)), abs_floor);
            const bool converged = err <= 15.0 * tol && depth >= min_depth;
            if (converged || (b - a) < 1e-14 * std::max(1.0, std::abs(b)))
                return sum + (sum - whole) * (1.0 / 15.0);
            if (depth >= max_depth)
                throw NumericError("adaptive_simpson: max recursion depth reached");
            return recurse(a, lm, m, fa, flm, fm, left, depth + 1) +
                   recurse(m, rm, b, fm, frm, fb, right, depth + 1);
        }
    };
    if (!(b >= a)) throw Error("adaptive_simpson: bad interval");
    if (a == b) return R{};
    Impl impl{f, rel_tol, abs_floor, max_depth, min_depth};
    // seed the error scale with a coarse pass so that relative tolerance is
    // measured against the whole integral, not a vanishing subinterval
    const double m = 0.5 * (a + b);
    const R fa = f(a), fm = f(m), fb = f(b);
    const R whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
    impl.scale = detail::quad_mag(whole);
    return impl.recurse(a, m, b, fa, fm, fb, whole, 0);
}

} // namespace opstable
