#pragma once

// Laplace-transform probe for non-existence.  For a candidate front s(t) the
// transform of the front-frame field, U_hat(lambda,t) = int_0^inf e^{-lambda x}
// U(x,t) dx, satisfies an exact ODE in t whose solution is
//
//   U_hat(lambda,t) = int_0^t e^{lambda^2 (t-sigma) + lambda (s(t)-s(sigma))}
//                     (g_hat(lambda,sigma) - alpha) dsigma,
//
// where g_hat is the transform of the shifted source.  Since U >= 0 forces
// U_hat >= 0, any (s, lambda, t) with a negative integral certifies that no
// nonnegative solution follows that front.  For bounded sources
// g_hat - alpha <= ||f||_inf/lambda - alpha <= -alpha/2 once
// lambda >= 2 ||f||_inf / alpha, so past that threshold the integral is
// negative for every continuous trajectory.
//
// The growing exponential is never formed: everything is computed in the
// scaled variable
//
//   scaled_u_hat = e^{-lambda^2 t - lambda s(t)} U_hat
//                = int_0^t e^{-lambda^2 sigma - lambda s(sigma)}
//                  (g_hat(lambda,sigma) - alpha) dsigma,
//
// further shifted by the max of the exponent over presamples before
// quadrature.  The sign (the certificate) is read off the scaled value.
//
// probe_interval sharpens the bound when the solution is known to live on a
// bounded interval [s(t), s(t) + gap(t)]: the far boundary contributes an
// extra -alpha e^{-lambda gap(sigma)} to the integrand, so the interval
// probe is always at or below the half-line one.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fblab/interpolate.hpp"
#include "fblab/quadrature.hpp"
#include "fblab/source.hpp"

namespace fblab {

enum class SignCertificate { Negative, NonNegative, Indeterminate };

inline const char* to_string(SignCertificate c) {
    switch (c) {
        case SignCertificate::Negative: return "Negative";
        case SignCertificate::NonNegative: return "NonNegative";
        case SignCertificate::Indeterminate: return "Indeterminate";
    }
    return "?";
}

/// Candidate front trajectory s(t).  Only positions enter the probe (the
/// speed is absorbed by an exact antiderivative), so a callable s suffices;
/// tabulated trajectories are completed to C^1 by monotone cubics.
class Trajectory {
  public:
    static Trajectory from_callable(std::function<double(double)> s) {
        if (!s) throw std::invalid_argument("Trajectory: empty callable");
        Trajectory tr;
        tr.fn_ = std::move(s);
        return tr;
    }

    static Trajectory tabulated(std::vector<double> t, std::vector<double> s) {
        auto interp = std::make_shared<MonotoneCubic>(std::move(t), std::move(s));
        Trajectory tr;
        tr.fn_ = [interp](double tau) { return (*interp)(tau); };
        return tr;
    }

    double operator()(double t) const { return fn_(t); }

  private:
    Trajectory() = default;
    std::function<double(double)> fn_;
};

/// The four stock trajectories used by the witness demo: resting, advancing,
/// retreating like -sqrt(t), and oscillating.
inline std::vector<std::pair<std::string, Trajectory>> preset_trajectories() {
    return {
        {"zero", Trajectory::from_callable([](double) { return 0.0; })},
        {"linear", Trajectory::from_callable([](double t) { return t; })},
        {"neg-sqrt", Trajectory::from_callable([](double t) { return -std::sqrt(t); })},
        {"sine", Trajectory::from_callable([](double t) { return std::sin(t); })},
    };
}

struct ProbeQuery {
    double lambda = 1.0;  // transform variable, > 0
    double alpha = 1.0;   // front flux, > 0
    double t = 1.0;       // probe time, >= 0
    Trajectory trajectory = preset_trajectories()[0].second;
    SourceTerm src = SourceTerm::zero();
};

struct ProbeResult {
    double u_hat = 0.0;            // U_hat(lambda, t); NaN when not representable
    bool u_hat_valid = true;       // false iff reconstructing u_hat overflows
    double scaled_u_hat = 0.0;     // e^{-lambda^2 t - lambda s(t)} U_hat
    SignCertificate sign_certificate = SignCertificate::NonNegative;
    double lambda_threshold = 0.0; // 2 ||f||_inf / alpha; +inf for unbounded f
    std::string note;              // diagnostic when Indeterminate
};

/// Transform of the shifted source, g_hat(lambda, sigma) =
/// int_0^inf e^{-lambda x} f(x + s(sigma), sigma) dx.
inline double g_hat(const SourceTerm& src, const Trajectory& traj, double lambda,
                    double sigma) {
    if (!(std::isfinite(lambda) && lambda > 0.0))
        throw std::invalid_argument("g_hat: lambda must be positive");
    switch (src.kind()) {
        case SourceTerm::Kind::Zero:
            return 0.0;
        case SourceTerm::Kind::Constant:
            return src.amplitude() / lambda;
        case SourceTerm::Kind::InverseSqrtTime:
            if (!(sigma > 0.0))
                throw std::domain_error("g_hat: 1/sqrt(t) source needs sigma > 0");
            return src.amplitude() / (lambda * std::sqrt(sigma));
        case SourceTerm::Kind::Tabulated: {
            const double s = traj(sigma);
            // Past the table the source is constant, giving an exact tail.
            const double x_cut = std::max(0.0, src.table_back() - s);
            const double f_far = src.value(src.table_back(), sigma);
            double head = 0.0;
            if (x_cut > 0.0)
                head = integrate([&](double x) { return std::exp(-lambda * x) * src.value(x + s, sigma); },
                                 0.0, x_cut, 1e-12);
            return head + f_far * std::exp(-lambda * x_cut) / lambda;
        }
    }
    return 0.0;  // unreachable
}

namespace detail {

inline void validate_query(const ProbeQuery& q, const char* who) {
    if (!(std::isfinite(q.lambda) && q.lambda > 0.0))
        throw std::invalid_argument(std::string(who) + ": lambda must be positive");
    if (!(std::isfinite(q.alpha) && q.alpha > 0.0))
        throw std::invalid_argument(std::string(who) + ": alpha must be positive");
    if (!(std::isfinite(q.t) && q.t >= 0.0))
        throw std::invalid_argument(std::string(who) + ": t must be finite and >= 0");
}

inline double threshold_of(const SourceTerm& src, double alpha) {
    return src.bounded() ? 2.0 * src.sup() / alpha
                         : std::numeric_limits<double>::infinity();
}

// Shared core of probe_formula / probe_interval; `gap` is null for the
// half-line probe.
inline ProbeResult probe_core(const ProbeQuery& q,
                              const std::function<double(double)>* gap,
                              double quad_tol, const char* who) {
    validate_query(q, who);
    if (!(quad_tol > 0.0))
        throw std::invalid_argument(std::string(who) + ": quad_tol must be positive");

    ProbeResult res;
    res.lambda_threshold = threshold_of(q.src, q.alpha);
    if (q.t == 0.0) {
        // Empty integral: U_hat(lambda, 0) = 0 for compatible data.
        return res;
    }

    const double lam = q.lambda;
    auto expo = [&](double sig) { return -lam * lam * sig - lam * q.trajectory(sig); };

    // Shift by the exponent maximum over presamples to keep exp() tame.
    double e_ref = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 64; ++k) {
        const double sig = q.t * k / 64.0;
        e_ref = std::max(e_ref, expo(sig));
        if (gap && sig > 0.0 && !((*gap)(sig) > 0.0))
            throw std::domain_error(std::string(who) + ": gap must be positive on (0, t]");
    }

    auto extra = [&](double sig) {  // interval correction, <= 0 contribution
        return gap ? q.alpha * std::exp(-lam * (*gap)(sig)) : 0.0;
    };

    // All probes integrate in v = sqrt(sigma): the factor 2v cancels the
    // 1/sqrt(sigma) singularity of the unbounded source, and sqrt(t)-like
    // trajectories (whose e^{-lambda s} has an infinite-slope corner at 0)
    // become smooth in v.
    double j = 0.0;
    try {
        if (q.src.kind() == SourceTerm::Kind::InverseSqrtTime) {
            const double h = q.src.amplitude();
            j = integrate(
                [&](double v) {
                    const double sig = v * v;
                    const double w = std::exp(expo(sig) - e_ref);
                    return w * (2.0 * h / lam - 2.0 * v * (q.alpha + extra(sig)));
                },
                0.0, std::sqrt(q.t), quad_tol);
        } else {
            j = integrate(
                [&](double v) {
                    const double sig = v * v;
                    const double w = std::exp(expo(sig) - e_ref);
                    return 2.0 * v * w *
                           (g_hat(q.src, q.trajectory, lam, sig) - q.alpha - extra(sig));
                },
                0.0, std::sqrt(q.t), quad_tol);
        }
    } catch (const quadrature_error& e) {
        res.u_hat = std::numeric_limits<double>::quiet_NaN();
        res.u_hat_valid = false;
        res.scaled_u_hat = std::numeric_limits<double>::quiet_NaN();
        res.sign_certificate = SignCertificate::Indeterminate;
        res.note = std::string("quadrature did not converge: ") + e.what();
        return res;
    }

    res.scaled_u_hat = std::exp(e_ref) * j;

    // Reconstruct the unscaled transform when it fits in a double.
    const double back_shift = e_ref - expo(q.t);  // >= 0, t is a presample
    if (back_shift < 700.0) {
        res.u_hat = std::exp(back_shift) * j;
        res.u_hat_valid = std::isfinite(res.u_hat);
    } else {
        res.u_hat = std::numeric_limits<double>::quiet_NaN();
        res.u_hat_valid = false;
    }

    // Sign certificate: negative only beyond the quadrature noise floor.
    const double noise = 100.0 * quad_tol * std::exp(std::min(e_ref, 700.0));
    if (!std::isfinite(res.scaled_u_hat)) {
        res.sign_certificate = j < 0.0 ? SignCertificate::Negative
                                       : SignCertificate::NonNegative;
        res.note = "scaled value overflowed; sign taken from the shifted integral";
    } else if (res.scaled_u_hat < -noise) {
        res.sign_certificate = SignCertificate::Negative;
    } else {
        res.sign_certificate = SignCertificate::NonNegative;
    }
    return res;
}

}  // namespace detail

/// Half-line probe: scaled transform, certificate and threshold for (s, lambda, t).
inline ProbeResult probe_formula(const ProbeQuery& q, double quad_tol = 1e-10) {
    return detail::probe_core(q, nullptr, quad_tol, "probe_formula");
}

/// Interval probe: the solution is confined to [s(t), s(t) + gap(t)], gap > 0.
/// Strictly below the half-line probe, and converges to it as gap -> inf.
inline ProbeResult probe_interval(const ProbeQuery& q,
                                  const std::function<double(double)>& gap,
                                  double quad_tol = 1e-10) {
    if (!gap) throw std::invalid_argument("probe_interval: empty gap callable");
    return detail::probe_core(q, &gap, quad_tol, "probe_interval");
}

struct TransformResult {
    double value = 0.0;
    double tail_bound = 0.0;  // sup|U| e^{-lambda x_max} / lambda
};

/// Finite-window Laplace transform int_0^{x_max} e^{-lambda x} U(x) dx with a
/// rigorous truncation bound (sup taken over the quadrature nodes).  Errors
/// out when the bound exceeds tol, i.e. when x_max is too small for lambda.
inline TransformResult transform_numeric(const std::function<double(double)>& field,
                                         double lambda, double x_max, double tol = 1e-10) {
    if (!field) throw std::invalid_argument("transform_numeric: empty field callable");
    if (!(std::isfinite(lambda) && lambda > 0.0))
        throw std::invalid_argument("transform_numeric: lambda must be positive");
    if (!(std::isfinite(x_max) && x_max > 0.0))
        throw std::invalid_argument("transform_numeric: x_max must be positive");
    if (!(tol > 0.0))
        throw std::invalid_argument("transform_numeric: tol must be positive");

    double sup_u = 0.0;
    const double value = integrate(
        [&](double x) {
            const double u = field(x);
            sup_u = std::max(sup_u, std::abs(u));
            return std::exp(-lambda * x) * u;
        },
        0.0, x_max, 0.5 * tol);
    TransformResult res{value, sup_u * std::exp(-lambda * x_max) / lambda};
    if (res.tail_bound > tol)
        throw std::invalid_argument(
            "transform_numeric: truncation tail bound " + std::to_string(res.tail_bound) +
            " exceeds tol; increase x_max");
    return res;
}

/// Sampled-field overload: the table is completed by a monotone cubic and
/// transformed over its own span.
inline TransformResult transform_numeric(const std::vector<double>& x,
                                         const std::vector<double>& u, double lambda,
                                         double tol = 1e-10) {
    auto interp = std::make_shared<MonotoneCubic>(x, u);
    return transform_numeric([interp](double xx) { return (*interp)(xx); }, lambda,
                             interp->back(), tol);
}

struct WitnessRow {
    std::string trajectory_id;
    double lambda = 0.0;
    double t = 0.0;
    double scaled_u_hat = 0.0;
    SignCertificate certificate = SignCertificate::Indeterminate;
};

/// Runs the probe at the non-existence threshold for each candidate front.
/// Only bounded sources are allowed: the threshold argument needs
/// ||f||_inf < inf, so an unbounded source is refused outright.
inline std::vector<WitnessRow> nonexistence_witness(
    const SourceTerm& src, const std::vector<std::pair<std::string, Trajectory>>& trajectories,
    double alpha, double t, double lambda_min = 0.1) {
    if (!src.bounded())
        throw std::invalid_argument(
            "nonexistence_witness: the threshold 2||f||_inf/alpha is infinite for an "
            "unbounded source, so no finite lambda certifies non-existence; "
            "use a bounded source");
    if (!(std::isfinite(alpha) && alpha > 0.0))
        throw std::invalid_argument("nonexistence_witness: alpha must be positive");
    if (!(std::isfinite(t) && t > 0.0))
        throw std::invalid_argument("nonexistence_witness: t must be positive");
    if (!(lambda_min > 0.0))
        throw std::invalid_argument("nonexistence_witness: lambda_min must be positive");

    const double lambda = std::max(2.0 * src.sup() / alpha, lambda_min);
    std::vector<WitnessRow> rows;
    rows.reserve(trajectories.size());
    for (const auto& [id, traj] : trajectories) {
        ProbeQuery q;
        q.lambda = lambda;
        q.alpha = alpha;
        q.t = t;
        q.trajectory = traj;
        q.src = src;
        const ProbeResult r = probe_formula(q);
        rows.push_back(WitnessRow{id, lambda, t, r.scaled_u_hat, r.sign_certificate});
    }
    return rows;
}

}  // namespace fblab
