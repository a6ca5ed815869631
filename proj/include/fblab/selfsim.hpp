#pragma once

// Self-similar solutions u(x,t) = sqrt(t) w(x/sqrt(t)) of the free-boundary
// problem with source f(x,t) = h/sqrt(t): the front is s(t) = sigma sqrt(t),
// i.e. the line y = sigma in the similarity variable y = x/sqrt(t), and the
// profile solves, on y >= sigma,
//
//     (1/2) w - (y/2) w' - w'' = h,   w(sigma) = 0,   w'(sigma) = alpha.
//
// The bounded branch is w(y) = -c1 W1(y) + 2h (no W0 = y component, which
// would grow linearly).  Eliminating c1 between the two front conditions
// pins sigma as the unique root of
//
//     ratio(sigma) = W1(sigma) / T(sigma) = h / alpha,
//
// which exists for every h, alpha > 0 since ratio is a decreasing bijection
// onto (0, inf); then c1 = 2h / W1(sigma).  Calibration: sigma = 0 exactly
// when h/alpha = ratio(0) = 1/sqrt(pi).

#include <cmath>
#include <stdexcept>
#include <string>

#include "fblab/hermite.hpp"

namespace fblab {

/// Parameters of one self-similar profile.  c0 is the coefficient of the
/// unbounded solution W0; it is always 0 on the bounded branch and is kept
/// only so the represented family matches the general solution space.
struct SelfSimilarProfile {
    double alpha;  // front flux, > 0
    double h;      // source amplitude of f = h/sqrt(t), > 0
    double sigma;  // similarity front slope, s(t) = sigma sqrt(t)
    double c1;     // profile coefficient, w = -c1 W1 + 2h
    double c0;     // always 0 (bounded branch)
};

namespace detail {

inline constexpr double kSigmaCap = 100.0;

inline void check_positive(double v, const char* name, const char* who) {
    if (!(std::isfinite(v) && v > 0.0))
        throw std::invalid_argument(std::string(who) + ": " + name + " must be positive and finite");
}

}  // namespace detail

/// Root of ratio(sigma) = h/alpha with |ratio(sigma) - h/alpha| <= tol.
/// The bracket is grown outward from [-1, 1] by doubling; |sigma| is capped
/// at 100, far outside any physically sensible slope, and exceeding the cap
/// raises a range error instead of silently extrapolating.
inline double solve_sigma(double h, double alpha, double tol = 1e-12) {
    detail::check_positive(h, "h", "solve_sigma");
    detail::check_positive(alpha, "alpha", "solve_sigma");
    detail::check_positive(tol, "tol", "solve_sigma");
    const double target = h / alpha;

    double lo = -1.0, hi = 1.0;  // ratio(lo) >= target >= ratio(hi) wanted
    while (ratio(lo) < target) {
        lo *= 2.0;
        if (lo < -detail::kSigmaCap)
            throw std::range_error("solve_sigma: h/alpha exceeds ratio(-100); slope out of range");
    }
    while (ratio(hi) > target) {
        hi *= 2.0;
        if (hi > detail::kSigmaCap)
            throw std::range_error("solve_sigma: h/alpha below ratio(100); slope out of range");
    }

    // Safeguarded Newton: ratio' = -2F/T^2 is available analytically; any
    // iterate leaving the bracket falls back to bisection.
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double r = ratio(x) - target;
        if (std::abs(r) <= tol) return x;
        if (r > 0.0) lo = x; else hi = x;
        const double dr = ratio_derivative(x);
        double next = x - r / dr;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == x)  // interval collapsed to adjacent doubles
            next = 0.5 * (lo + hi);
        x = next;
    }
    if (std::abs(ratio(x) - target) <= tol) return x;
    throw std::runtime_error("solve_sigma: iteration did not reach tolerance");
}

/// Full profile for given source amplitude and front flux.
inline SelfSimilarProfile build_profile(double h, double alpha, double tol = 1e-12) {
    const double sigma = solve_sigma(h, alpha, tol);
    return SelfSimilarProfile{alpha, h, sigma, 2.0 * h / w1(sigma), 0.0};
}

namespace detail {

// Relative slack for the physical-domain guards: evaluation exactly on the
// front may land one rounding ulp inside the forbidden side.
inline double guard_slack(double scale) {
    return 1e-12 * std::max(1.0, std::abs(scale));
}

inline void check_profile_domain(const SelfSimilarProfile& p, double y, const char* who) {
    if (!std::isfinite(y))
        throw std::domain_error(std::string(who) + ": argument must be finite");
    if (y < p.sigma - guard_slack(p.sigma))
        throw std::domain_error(std::string(who) + ": y < sigma lies outside the physical region");
}

}  // namespace detail

/// Profile value w(y) = -c1 W1(y) + 2h for y >= sigma; w(sigma) = 0.
inline double eval_w(const SelfSimilarProfile& p, double y) {
    detail::check_profile_domain(p, y, "eval_w");
    y = std::max(y, p.sigma);
    return -p.c1 * w1(y) + 2.0 * p.h;
}

/// w'(y) = -c1 W1'(y); equals alpha at y = sigma.
inline double eval_w_prime(const SelfSimilarProfile& p, double y) {
    detail::check_profile_domain(p, y, "eval_w_prime");
    y = std::max(y, p.sigma);
    return -p.c1 * dw1(y);
}

/// w''(y) = -c1 W1''(y).
inline double eval_w_second(const SelfSimilarProfile& p, double y) {
    detail::check_profile_domain(p, y, "eval_w_second");
    y = std::max(y, p.sigma);
    return -p.c1 * ddw1(y);
}

/// Front position s(t) = sigma sqrt(t), defined for t >= 0.
inline double eval_s(const SelfSimilarProfile& p, double t) {
    if (!(std::isfinite(t) && t >= 0.0))
        throw std::domain_error("eval_s: t must be finite and nonnegative");
    return p.sigma * std::sqrt(t);
}

/// Solution value u(x,t) = sqrt(t) w(x/sqrt(t)) for t > 0, x >= s(t).
/// Here x is measured in the fixed (lab) frame, so the similarity variable
/// is y = x / sqrt(t) and the front sits at y = sigma.
inline double eval_u(const SelfSimilarProfile& p, double x, double t) {
    if (!(std::isfinite(t) && t > 0.0))
        throw std::domain_error("eval_u: t must be finite and positive");
    if (!std::isfinite(x))
        throw std::domain_error("eval_u: x must be finite");
    const double rt = std::sqrt(t);
    const double st = p.sigma * rt;
    if (x < st - detail::guard_slack(st))
        throw std::domain_error("eval_u: x left of the front lies outside the physical region");
    return rt * eval_w(p, std::max(x / rt, p.sigma));
}

}  // namespace fblab
