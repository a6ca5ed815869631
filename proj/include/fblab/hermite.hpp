#pragma once

// Fundamental system of the Hermite-type equation satisfied by self-similar
// profiles of the one-phase Stefan-like free-boundary flow,
//
//     (1/2) w(y) - (y/2) w'(y) - w''(y) = 0,
//
// on the whole line.  The two solutions used throughout are
//
//     W0(y) = y,
//     W1(y) = e^{-y^2/4} - (y/2) * T(y),   T(y) = int_y^inf e^{-z^2/4} dz,
//
// with W1 > 0, strictly decreasing and convex, W1' = -T/2, W1'' = e^{-y^2/4}/2.
// The front-slope equation is solved through
//
//     ratio(y) = -W1(y) / (2 W1'(y)) = W1(y) / T(y),
//
// which decreases strictly from +inf to 0, with ratio(y) -> |y|/2 as y -> -inf
// and ratio(y) ~ 1/y as y -> +inf.  Its derivative is -2 F(y) / T(y)^2 where
//
//     F(y) = W1'(y)^2 - W1(y) W1''(y) > 0 for all y (Wronskian-type combination).

#include <cmath>
#include <stdexcept>
#include <string>

#include "fblab/erfc.hpp"

namespace fblab {

namespace detail {

// Past this point W1 and T both underflow-cancel; switch ratio() to the
// exact scaled form 1/(sqrt(pi) erfcx(y/2)) - y/2.
inline constexpr double kRatioScaledCutoff = 27.0;

inline void require_finite(double y, const char* who) {
    if (!std::isfinite(y))
        throw std::domain_error(std::string(who) + ": argument must be finite");
}

}  // namespace detail

/// Bundle of the kernel quantities at one point.
struct HermiteKernelValue {
    double y;
    double w1;           // W1(y)
    double dw1;          // W1'(y)
    double ddw1;         // W1''(y)
    double tail;         // T(y) = int_y^inf e^{-z^2/4} dz
    double ratio;        // W1(y) / T(y)
    double f_wronskian;  // W1'^2 - W1 W1''
};

/// Gaussian tail integral T(y) = int_y^inf e^{-z^2/4} dz = sqrt(pi) erfc(y/2).
inline double tail_integral(double y) {
    detail::require_finite(y, "tail_integral");
    return detail::kSqrtPi * erfc(0.5 * y);
}

/// First fundamental solution W0(y) = y.
inline double w0(double y) {
    detail::require_finite(y, "w0");
    return y;
}

/// Second fundamental solution W1(y) = e^{-y^2/4} - (y/2) T(y).
/// Positive for all y; underflows to 0 for y > ~54.
inline double w1(double y) {
    detail::require_finite(y, "w1");
    return std::exp(-0.25 * y * y) - 0.5 * y * tail_integral(y);
}

/// W1'(y) = -T(y)/2, negative everywhere.
inline double dw1(double y) {
    detail::require_finite(y, "dw1");
    return -0.5 * tail_integral(y);
}

/// W1''(y) = e^{-y^2/4} / 2.
inline double ddw1(double y) {
    detail::require_finite(y, "ddw1");
    return 0.5 * std::exp(-0.25 * y * y);
}

/// F(y) = W1'(y)^2 - W1(y) W1''(y), positive; decays like e^{-y^2/2} for y -> inf.
inline double f_wronskian(double y) {
    detail::require_finite(y, "f_wronskian");
    const double d = dw1(y);
    return d * d - w1(y) * ddw1(y);
}

/// ratio(y) = W1(y) / T(y) = -W1/(2 W1').  Strictly decreasing bijection
/// from the real line onto (0, inf).
inline double ratio(double y) {
    detail::require_finite(y, "ratio");
    if (y < detail::kRatioScaledCutoff)
        return w1(y) / tail_integral(y);
    // w1/T = e^{-y^2/4}/T - y/2 with e^{-y^2/4}/T = 1/(sqrt(pi) erfcx(y/2)):
    // no underflow, relative error ~ eps * y^2 / 2.
    return 1.0 / (detail::kSqrtPi * erfcx(0.5 * y)) - 0.5 * y;
}

/// ratio'(y) = -2 F(y) / T(y)^2, negative everywhere.
inline double ratio_derivative(double y) {
    detail::require_finite(y, "ratio_derivative");
    const double t = tail_integral(y);
    return -2.0 * f_wronskian(y) / (t * t);
}

/// All kernel quantities at y in one evaluation.
inline HermiteKernelValue kernel_at(double y) {
    detail::require_finite(y, "kernel_at");
    HermiteKernelValue v;
    v.y = y;
    const double gauss = std::exp(-0.25 * y * y);
    v.tail = tail_integral(y);
    v.w1 = gauss - 0.5 * y * v.tail;
    v.dw1 = -0.5 * v.tail;
    v.ddw1 = 0.5 * gauss;
    v.ratio = ratio(y);
    v.f_wronskian = v.dw1 * v.dw1 - v.w1 * v.ddw1;
    return v;
}

}  // namespace fblab
