#pragma once

// Adaptive Simpson quadrature with Richardson error control.  Used for the
// Laplace-side integrals and the Arrhenius kernel normalizer; integrands are
// smooth after the substitutions applied at the call sites, so the classic
// bisection scheme is enough.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace fblab {

/// Thrown when the recursion depth limit is hit before the local error
/// estimate drops below tolerance.
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Bisections performed regardless of the error estimate.  An integrand whose
// mass sits between the five initial probe nodes (e.g. e^{-lambda x} with
// lambda x_max >> 1) looks converged at the top level; 2^8 = 256 mandatory
// leaves rule that out for any feature wider than (b - a)/256.
inline constexpr int kForcedSplits = 8;

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, int force) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Splitting cannot continue once the midpoints stop being interior nodes.
    if (!(a < lm && lm < m && m < rm && rm < b))
        return left + right + delta / 15.0;
    // Rounding the midpoint of [a, b] perturbs the child widths by up to
    // ulp(|a|, |b|)/2, so delta carries an irreducible noise term of about
    // eps * (|a| + |b|) * max|f| that does not shrink under further splits.
    // Accept once delta is below that floor, else the recursion cannot
    // terminate for tolerances tighter than the floor.
    const double fscale = std::max({std::abs(fa), std::abs(flm), std::abs(fm),
                                    std::abs(frm), std::abs(fb)});
    const double noise = std::numeric_limits<double>::epsilon() *
                         ((std::abs(a) + std::abs(b)) * fscale + std::abs(left) + std::abs(right));
    if (force <= 0 && (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise))
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw quadrature_error("adaptive Simpson: depth limit reached before tolerance");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

}  // namespace detail

/// Integral of f over [a, b] to absolute tolerance abs_tol.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::domain_error("integrate: endpoints must be finite");
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("integrate: abs_tol must be positive");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth,
                               detail::kForcedSplits);
}

}  // namespace fblab
