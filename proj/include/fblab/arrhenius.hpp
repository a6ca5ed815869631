#pragma once

// Arrhenius-type regularization of the free boundary: instead of tracking a
// front, the heat equation gets a concentrated sink
//
//     u_t = u_xx + f - beta_eps(u),   beta_eps(u) = beta(u/eps)/eps,
//
// where beta(s) = C exp(-1/(s(1-s))) on (0,1), zero outside, and C is chosen
// once so that int_0^1 beta = 1/2 (hence int beta_eps = 1/2 for every eps):
// the sink burns exactly the latent-heat budget alpha^2/2-per-unit-front of
// the sharp problem as eps -> 0.
//
// Time discretization is IMEX: diffusion implicit (unconditionally stable),
// the sink explicit with a clip at u/dt so one step can never drive u below
// zero.  The explicit sink needs dt max|beta_eps'| <= 1, checked up front.
// Both ends are zero-flux, so the trapezoid mass obeys the exact discrete
// balance  d(mass)/dt = source - sink  (residual at rounding level).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fblab/fbsolver.hpp"
#include "fblab/quadrature.hpp"
#include "fblab/source.hpp"
#include "fblab/tridiag.hpp"

namespace fblab {

class ArrheniusKernel {
  public:
    explicit ArrheniusKernel(double eps) : eps_(eps) {
        if (!(std::isfinite(eps) && eps > 0.0))
            throw std::invalid_argument("ArrheniusKernel: eps must be positive");
        const double i0 = integrate(&ArrheniusKernel::bump, 0.0, 1.0, 1e-14);
        c_ = 0.5 / i0;
        m1_ = c_ * find_max_bump_derivative();
    }

    double eps() const { return eps_; }

    /// Normalizer C of beta(s) = C exp(-1/(s(1-s))); makes int_0^1 beta = 1/2.
    double normalizer() const { return c_; }

    /// Base kernel on (0,1); identically zero outside.
    double beta(double s) const { return c_ * bump(s); }

    /// Scaled kernel beta(s/eps)/eps, supported on (0, eps), mass 1/2.
    double beta_eps(double s) const { return beta(s / eps_) / eps_; }

    /// max_s |beta_eps'(s)| = max|beta'| / eps^2; explicit-sink stability scale.
    double max_beta_eps_derivative() const { return m1_ / (eps_ * eps_); }

    /// Largest dt the explicit sink tolerates, eps^2 / max|beta'|.
    double suggested_dt() const { return 1.0 / max_beta_eps_derivative(); }

  private:
    static double bump(double s) {
        const double phi = s * (1.0 - s);
        return phi > 0.0 ? std::exp(-1.0 / phi) : 0.0;
    }

    static double bump_derivative(double s) {
        const double phi = s * (1.0 - s);
        return phi > 0.0 ? std::exp(-1.0 / phi) * (1.0 - 2.0 * s) / (phi * phi) : 0.0;
    }

    // max over (0, 1/2) of bump' (the kernel is symmetric): dense scan, then
    // ternary refinement of the winning bracket.
    static double find_max_bump_derivative() {
        const int n = 2000;
        int best = 1;
        double best_v = 0.0;
        for (int i = 1; i < n; ++i) {
            const double v = bump_derivative(0.5 * i / n);
            if (v > best_v) { best_v = v; best = i; }
        }
        double lo = 0.5 * (best - 1) / n, hi = 0.5 * (best + 1) / n;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (bump_derivative(m1) < bump_derivative(m2)) lo = m1; else hi = m2;
        }
        return bump_derivative(0.5 * (lo + hi));
    }

    double eps_, c_, m1_;
};

inline ArrheniusKernel make_kernel(double eps) { return ArrheniusKernel(eps); }

struct RegularizedStep {
    double t = 0.0;
    double min_u = 0.0;
    double mass = 0.0;              // trapezoid integral of u
    double sink_total = 0.0;        // heat removed by the sink up to t
    double balance_residual = 0.0;  // d(mass)/dt - source + sink, one step
};

struct RegularizedReport {
    std::vector<RegularizedStep> series;
    FieldSnapshot initial_field;
    FieldSnapshot final_field;
    double min_u_overall = 0.0;
    double max_balance_residual = 0.0;
};

namespace detail {

inline double trapezoid_mass(const std::vector<double>& u, double dx) {
    double m = 0.5 * (u.front() + u.back());
    for (std::size_t i = 1; i + 1 < u.size(); ++i) m += u[i];
    return m * dx;
}

// IMEX march shared by the regularized and plain-heat runs (kernel == nullptr
// switches the sink off).
inline RegularizedReport imex_march(const std::vector<double>& u0, const SourceTerm& src,
                                    const ArrheniusKernel* kernel, const Grid1D& grid,
                                    double dt, double t_end, double t0) {
    validate_grid(grid, "solve_regularized");
    const int N = grid.nodes();
    if (static_cast<int>(u0.size()) != N)
        throw std::invalid_argument("solve_regularized: u0 size does not match grid");
    for (double v : u0)
        if (!(std::isfinite(v) && v >= 0.0))
            throw std::invalid_argument("solve_regularized: u0 must be finite and >= 0");
    if (!(std::isfinite(dt) && dt > 0.0))
        throw std::invalid_argument("solve_regularized: dt must be positive");
    if (!(t_end > t0))
        throw std::invalid_argument("solve_regularized: t_end must exceed t0");
    if (!src.bounded())
        throw std::invalid_argument("solve_regularized: source must be bounded");
    if (kernel && dt * kernel->max_beta_eps_derivative() > 1.0)
        throw std::invalid_argument(
            "solve_regularized: explicit sink unstable, dt * max|beta_eps'| = " +
            std::to_string(dt * kernel->max_beta_eps_derivative()) +
            " > 1; use dt <= " + std::to_string(kernel->suggested_dt()));

    const double dx = grid.dx();
    std::vector<double> u = u0, lower(N - 1), diag(N), upper(N - 1), sink(N);

    RegularizedReport rep;
    rep.initial_field = FieldSnapshot{t0, u0};
    rep.min_u_overall = *std::min_element(u.begin(), u.end());
    double t = t0;
    double sink_total = 0.0;
    rep.series.push_back(RegularizedStep{t, rep.min_u_overall, trapezoid_mass(u, dx),
                                         0.0, 0.0});

    while (t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
        const double dt_k = std::min(dt, t_end - t);
        const double r = dt_k / (dx * dx);

        const double mass_old = trapezoid_mass(u, dx);
        double q_src = 0.0, q_sink = 0.0;
        for (int i = 0; i < N; ++i) {
            const double g = src.time_averaged(i * dx, t, dt_k);
            double b = 0.0;
            if (kernel) b = std::min(kernel->beta_eps(u[i]), u[i] / dt_k);
            sink[i] = b;
            const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;  // trapezoid weight
            q_src += w * g;
            q_sink += w * b;
            u[i] += dt_k * (g - b);  // rhs of the implicit solve
        }
        q_src *= dx;
        q_sink *= dx;

        // (I - dt D2) with mirror ghosts at both ends.
        for (int i = 0; i < N; ++i) diag[i] = 1.0 + 2.0 * r;
        for (int i = 0; i + 1 < N; ++i) { lower[i] = -r; upper[i] = -r; }
        upper[0] = -2.0 * r;
        lower[N - 2] = -2.0 * r;
        solve_tridiagonal(lower, diag, upper, u);

        t += dt_k;
        sink_total += dt_k * q_sink;
        const double mass_new = trapezoid_mass(u, dx);
        const double residual = (mass_new - mass_old) / dt_k - q_src + q_sink;
        const double min_u = *std::min_element(u.begin(), u.end());
        rep.min_u_overall = std::min(rep.min_u_overall, min_u);
        rep.max_balance_residual = std::max(rep.max_balance_residual, std::abs(residual));
        rep.series.push_back(RegularizedStep{t, min_u, mass_new, sink_total, residual});
    }
    rep.final_field = FieldSnapshot{t, u};
    return rep;
}

}  // namespace detail

/// Regularized run with the sink beta_eps.
inline RegularizedReport solve_regularized(const std::vector<double>& u0,
                                           const SourceTerm& src, double eps,
                                           const Grid1D& grid, double dt, double t_end,
                                           double t0 = 0.0) {
    const ArrheniusKernel kernel(eps);
    return detail::imex_march(u0, src, &kernel, grid, dt, t_end, t0);
}

/// Same march with the sink switched off: plain Neumann heat solver, used as
/// the comparison baseline (the sink can only lower the solution).
inline RegularizedReport solve_heat(const std::vector<double>& u0, const SourceTerm& src,
                                    const Grid1D& grid, double dt, double t_end,
                                    double t0 = 0.0) {
    return detail::imex_march(u0, src, nullptr, grid, dt, t_end, t0);
}

}  // namespace fblab
