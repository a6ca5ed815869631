#pragma once

// Front-tracking solver for the one-phase parabolic free-boundary problem
//
//     u_t - u_xx = f        on x > s(t)
//     u = 0, u_x = alpha    at x = s(t),
//
// written in the front-attached frame U(x,t) = u(x + s(t), t):
//
//     U_t = U_xx + sdot U_x + g,   U(0,t) = 0,   U_x(0,t) = alpha,
//     g(x,t) = f(x + s(t), t),
//
// on the fixed strip [0, L] with a zero-flux (mirror) condition at L.  Each
// implicit Euler step treats sdot as an unknown closed by the flux condition:
// for a trial sdot the linear system below is solved by the Thomas algorithm
// and the residual
//
//     flux(sdot) - alpha,   flux = (-3 U_0 + 4 U_1 - U_2) / (2 dx)  (U_0 = 0)
//
// is driven to zero by a secant iteration (one tridiagonal solve per trial).
// Space: central differences; the advection term switches to first-order
// upwinding when the cell Peclet number |sdot| dx / 2 exceeds 1, which keeps
// the system an M-matrix, so nonnegative data with nonnegative source stays
// nonnegative.  A step that cannot reach the required flux marks the run
// FluxInfeasible; an accepted field dipping below -tol_neg marks it
// NegativityDetected.  Both stop the run at the last consistent state.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fblab/selfsim.hpp"
#include "fblab/source.hpp"
#include "fblab/tridiag.hpp"

namespace fblab {

/// Uniform grid on [0, L] in the front-attached frame: n cells, n+1 nodes.
struct Grid1D {
    double L = 10.0;
    int n = 200;
    double dx() const { return L / n; }
    int nodes() const { return n + 1; }
};

inline void validate_grid(const Grid1D& g, const char* who) {
    if (!(std::isfinite(g.L) && g.L > 0.0) || g.n < 3)
        throw std::invalid_argument(std::string(who) + ": grid needs L > 0 and n >= 3");
}

/// Field values on the grid nodes at one time; values[0] = 0 always
/// (Dirichlet condition at the front).
struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> values;
};

/// Front position and speed at one time.
struct FrontState {
    double t = 0.0;
    double s = 0.0;
    double sdot = 0.0;
};

enum class SolveStatus { Completed, FluxInfeasible, NegativityDetected };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Completed: return "Completed";
        case SolveStatus::FluxInfeasible: return "FluxInfeasible";
        case SolveStatus::NegativityDetected: return "NegativityDetected";
    }
    return "?";
}

struct SolverParams {
    Grid1D grid{};
    double alpha = 1.0;
    double tol_flux = 1e-9;   // |flux - alpha| accepted per step
    int max_newton = 50;      // secant evaluations per step
    double tol_neg = 1e-8;    // tolerated undershoot below zero
    double max_front_speed = 1e6;
    int snapshot_stride = 1;  // keep every k-th field in the report
};

/// Raised when the secant closure cannot reach flux = alpha at a step.
class flux_infeasible_error : public std::runtime_error {
  public:
    flux_infeasible_error(double t, const std::string& msg)
        : std::runtime_error(msg), t_(t) {}
    double t() const { return t_; }

  private:
    double t_;
};

/// Raised when an accepted field drops below -tol_neg; x is in the lab frame.
class negativity_error : public std::runtime_error {
  public:
    negativity_error(double t, double x, double value, const std::string& msg)
        : std::runtime_error(msg), t_(t), x_(x), value_(value) {}
    double t() const { return t_; }
    double x() const { return x_; }
    double value() const { return value_; }

  private:
    double t_, x_, value_;
};

struct StepDiagnostics {
    double t = 0.0;
    int iterations = 0;        // secant residual evaluations
    double flux_residual = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
};

struct StepResult {
    FieldSnapshot field;
    FrontState front;
    StepDiagnostics diagnostics;
};

struct SolveReport {
    std::vector<FieldSnapshot> snapshots;
    std::vector<FrontState> fronts;            // one per accepted time level
    std::vector<StepDiagnostics> diagnostics;  // parallel to fronts
    SolveStatus status = SolveStatus::Completed;
    double failure_time = std::numeric_limits<double>::quiet_NaN();
    double failure_x = std::numeric_limits<double>::quiet_NaN();
    std::string failure_message;
};

/// One-sided second-order flux at the front, (-3 U_0 + 4 U_1 - U_2)/(2 dx).
inline double front_flux(const std::vector<double>& u, double dx) {
    return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx);
}

namespace detail {

// Implicit step of U_t = U_xx + sdot U_x + g for one trial sdot; returns the
// front flux of the updated field.
inline double implicit_trial(const FieldSnapshot& field, double s_old, double sdot,
                             double dt, const SourceTerm& src, const SolverParams& prm,
                             std::vector<double>& lower, std::vector<double>& diag,
                             std::vector<double>& upper, std::vector<double>& u_new) {
    const Grid1D& g = prm.grid;
    const int N = g.nodes();
    const double dx = g.dx();
    const double r = dt / (dx * dx);
    const bool central = std::abs(sdot) * dx <= 2.0;  // cell Peclet |sdot| dx/2 <= 1
    const double a = dt * sdot / dx;
    const double s_new = s_old + dt * sdot;

    lower.assign(N - 1, 0.0);
    diag.assign(N, 0.0);
    upper.assign(N - 1, 0.0);
    u_new.assign(N, 0.0);  // doubles as the rhs

    diag[0] = 1.0;  // Dirichlet row, rhs 0

    for (int i = 1; i < N - 1; ++i) {
        if (central) {
            diag[i] = 1.0 + 2.0 * r;
            lower[i - 1] = -r + 0.5 * a;
            upper[i] = -r - 0.5 * a;
        } else if (sdot > 0.0) {  // upwind node is to the right
            diag[i] = 1.0 + 2.0 * r + a;
            lower[i - 1] = -r;
            upper[i] = -r - a;
        } else {                  // upwind node is to the left
            diag[i] = 1.0 + 2.0 * r - a;
            lower[i - 1] = -r + a;
            upper[i] = -r;
        }
        u_new[i] = field.values[i] + dt * src.time_averaged(i * dx + s_new, field.t, dt);
    }

    // Mirror ghost at L: Laplacian row (2 U_{N-2} - 2 U_{N-1})/dx^2; central
    // advection cancels, upwind contributions use the mirrored neighbor.
    diag[N - 1] = 1.0 + 2.0 * r;
    lower[N - 2] = -2.0 * r;
    if (!central) {
        if (sdot > 0.0) { diag[N - 1] += a; lower[N - 2] -= a; }
        else            { diag[N - 1] -= a; lower[N - 2] += a; }
    }
    u_new[N - 1] = field.values[N - 1] + dt * src.time_averaged((N - 1) * dx + s_new, field.t, dt);

    solve_tridiagonal(lower, diag, upper, u_new);
    return front_flux(u_new, dx);
}

inline StepDiagnostics field_diagnostics(double t, int iters, double residual,
                                         const std::vector<double>& u) {
    const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
    return StepDiagnostics{t, iters, residual, *mn, *mx};
}

}  // namespace detail

/// One implicit Euler step from (field, front) over dt.  front.sdot seeds the
/// secant iteration; on the first step of a run pass the best speed estimate
/// available (0 works but costs a few extra trials).
inline StepResult step(const FieldSnapshot& field, const FrontState& front, double dt,
                       const SourceTerm& src, const SolverParams& prm) {
    validate_grid(prm.grid, "step");
    if (!(std::isfinite(dt) && dt > 0.0))
        throw std::invalid_argument("step: dt must be positive");
    if (static_cast<int>(field.values.size()) != prm.grid.nodes())
        throw std::invalid_argument("step: field size does not match grid");
    if (std::abs(field.t - front.t) > 1e-12 * std::max(1.0, std::abs(field.t)))
        throw std::invalid_argument("step: field and front are at different times");
    if (!(prm.alpha > 0.0))
        throw std::invalid_argument("step: alpha must be positive");

    const double t_new = field.t + dt;
    std::vector<double> lower, diag, upper, u_new;

    auto residual = [&](double sdot) {
        return detail::implicit_trial(field, front.s, sdot, dt, src, prm,
                                      lower, diag, upper, u_new) - prm.alpha;
    };

    // Secant iteration on flux(sdot) = alpha.
    double x0 = front.sdot;
    double f0 = residual(x0);
    int evals = 1;
    double x_acc = x0, f_acc = f0;
    if (std::abs(f0) > prm.tol_flux) {
        double x1 = x0 + std::max(0.5, 0.1 * std::abs(x0));
        double f1 = residual(x1);
        ++evals;
        while (std::abs(f1) > prm.tol_flux) {
            if (evals >= prm.max_newton)
                throw flux_infeasible_error(t_new,
                    "step: flux condition not met in " + std::to_string(evals) +
                    " secant trials at t = " + std::to_string(t_new));
            const double denom = f1 - f0;
            if (!std::isfinite(f1) || std::abs(denom) < 1e-300)
                throw flux_infeasible_error(t_new,
                    "step: flux residual stagnated at t = " + std::to_string(t_new));
            const double x2 = x1 - f1 * (x1 - x0) / denom;
            if (!std::isfinite(x2) || std::abs(x2) > prm.max_front_speed)
                throw flux_infeasible_error(t_new,
                    "step: front speed diverged (flux target unreachable) at t = " +
                    std::to_string(t_new));
            x0 = x1; f0 = f1;
            x1 = x2; f1 = residual(x1);
            ++evals;
        }
        x_acc = x1; f_acc = f1;
    }

    const double s_new = front.s + dt * x_acc;
    const double min_u = *std::min_element(u_new.begin(), u_new.end());
    if (min_u < -prm.tol_neg) {
        const int i_min = static_cast<int>(std::min_element(u_new.begin(), u_new.end()) -
                                           u_new.begin());
        throw negativity_error(t_new, i_min * prm.grid.dx() + s_new, min_u,
            "step: field dropped to " + std::to_string(min_u) + " at t = " +
            std::to_string(t_new));
    }

    StepResult out;
    out.diagnostics = detail::field_diagnostics(t_new, evals, std::abs(f_acc), u_new);
    out.field = FieldSnapshot{t_new, std::move(u_new)};
    out.front = FrontState{t_new, s_new, x_acc};
    return out;
}

/// March from u0 (front at s0) to t_end in steps of dt (the last step is
/// shortened to land on t_end).  sdot_hint seeds the first step's secant.
/// Failures do not throw: the report carries the status, the failure time
/// and location, and everything accepted before the failure.
inline SolveReport solve(const FieldSnapshot& u0, double s0, double t_end, double dt,
                         const SourceTerm& src, const SolverParams& prm,
                         double sdot_hint = 0.0) {
    validate_grid(prm.grid, "solve");
    if (static_cast<int>(u0.values.size()) != prm.grid.nodes())
        throw std::invalid_argument("solve: u0 size does not match grid");
    if (!(std::isfinite(dt) && dt > 0.0))
        throw std::invalid_argument("solve: dt must be positive");
    if (!(t_end > u0.t))
        throw std::invalid_argument("solve: t_end must exceed the initial time");
    for (double v : u0.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("solve: u0 must be finite");
    if (std::abs(u0.values[0]) > 1e-12)
        throw std::invalid_argument("solve: u0 violates the compatibility condition u0(0) = 0");
    if (*std::min_element(u0.values.begin(), u0.values.end()) < -prm.tol_neg)
        throw std::invalid_argument("solve: u0 must be nonnegative (within tol_neg)");

    SolveReport rep;
    FieldSnapshot field = u0;
    field.values[0] = 0.0;
    FrontState front{u0.t, s0, sdot_hint};

    rep.snapshots.push_back(field);
    rep.fronts.push_back(front);
    rep.diagnostics.push_back(detail::field_diagnostics(
        u0.t, 0, std::abs(front_flux(field.values, prm.grid.dx()) - prm.alpha),
        field.values));

    const int stride = std::max(1, prm.snapshot_stride);
    long k = 0;
    while (field.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
        const double dt_k = std::min(dt, t_end - field.t);
        try {
            StepResult sr = step(field, front, dt_k, src, prm);
            field = std::move(sr.field);
            front = sr.front;
            rep.fronts.push_back(front);
            rep.diagnostics.push_back(sr.diagnostics);
            ++k;
            if (k % stride == 0) rep.snapshots.push_back(field);
        } catch (const flux_infeasible_error& e) {
            rep.status = SolveStatus::FluxInfeasible;
            rep.failure_time = e.t();
            rep.failure_message = e.what();
            break;
        } catch (const negativity_error& e) {
            rep.status = SolveStatus::NegativityDetected;
            rep.failure_time = e.t();
            rep.failure_x = e.x();
            rep.failure_message = e.what();
            break;
        }
    }
    if (rep.status == SolveStatus::Completed && rep.snapshots.back().t != field.t)
        rep.snapshots.push_back(field);
    return rep;
}

// ---------------------------------------------------------------------------
// Exact benchmark solutions.

/// Traveling wave u = (alpha/c)(1 - e^{-c(x - ct)}), front s(t) = ct: the
/// front-frame field (alpha/c)(1 - e^{-c x}) is stationary.
inline FieldSnapshot traveling_wave_snapshot(double alpha, double c, const Grid1D& g,
                                             double t0 = 0.0) {
    validate_grid(g, "traveling_wave_snapshot");
    if (!(alpha > 0.0) || !(c > 0.0))
        throw std::invalid_argument("traveling_wave_snapshot: alpha and c must be positive");
    FieldSnapshot f;
    f.t = t0;
    f.values.resize(g.nodes());
    for (int i = 0; i < g.nodes(); ++i)
        f.values[i] = alpha / c * (1.0 - std::exp(-c * i * g.dx()));
    f.values[0] = 0.0;
    return f;
}

/// Front-frame snapshot of the self-similar solution at time t0 > 0:
/// U(x, t0) = sqrt(t0) w(x/sqrt(t0) + sigma).
inline FieldSnapshot self_similar_snapshot(const SelfSimilarProfile& p, double t0,
                                           const Grid1D& g) {
    validate_grid(g, "self_similar_snapshot");
    if (!(t0 > 0.0))
        throw std::invalid_argument("self_similar_snapshot: t0 must be positive");
    FieldSnapshot f;
    f.t = t0;
    f.values.resize(g.nodes());
    const double rt = std::sqrt(t0);
    for (int i = 0; i < g.nodes(); ++i)
        f.values[i] = rt * eval_w(p, i * g.dx() / rt + p.sigma);
    f.values[0] = 0.0;
    return f;
}

// ---------------------------------------------------------------------------
// Convergence study against the exact benchmarks.

enum class BenchmarkKind { TravelingWave, SelfSimilar };

struct Benchmark {
    BenchmarkKind kind = BenchmarkKind::TravelingWave;
    double parameter = 1.0;  // wave speed c, or source amplitude h
    double alpha = 1.0;
    double L = 20.0;
    double t0 = 0.0;         // self-similar runs must start at t0 > 0
    double t_end = 1.0;
};

inline Benchmark traveling_wave_benchmark(double c = 1.0, double alpha = 1.0) {
    return Benchmark{BenchmarkKind::TravelingWave, c, alpha, 20.0, 0.0, 1.0};
}

inline Benchmark self_similar_benchmark(double h = 1.0, double alpha = 1.0) {
    return Benchmark{BenchmarkKind::SelfSimilar, h, alpha, 20.0, 0.25, 1.0};
}

/// Source term a benchmark runs with: none for the traveling wave,
/// h/sqrt(t) for the self-similar solution.
inline SourceTerm benchmark_source(const Benchmark& b) {
    return b.kind == BenchmarkKind::TravelingWave ? SourceTerm::zero()
                                                  : SourceTerm::inverse_sqrt_time(b.parameter);
}

struct ConvergenceRow {
    double dt = 0.0;
    double dx = 0.0;
    double front_error = 0.0;   // max_t |s_num - s_exact|
    double field_error = 0.0;   // max over kept snapshots and nodes, lab frame
    double observed_order = std::numeric_limits<double>::quiet_NaN();
};

/// Runs the benchmark on each (dt, dx) level and reports errors against the
/// exact solution.  Levels must halve dt and dx^2 together (ratio 2 within
/// 5%), so first-order-in-time and second-order-in-space error components
/// shrink at the same rate and the observed order log2(e_{k-1}/e_k) of the
/// front error is meaningful; at least 3 levels are required.
inline std::vector<ConvergenceRow> convergence_study(
    const Benchmark& b, const std::vector<std::pair<double, double>>& refinements,
    const SolverParams& base = {}) {
    if (refinements.size() < 3)
        throw std::invalid_argument("convergence_study: need at least 3 refinement levels");
    for (std::size_t k = 1; k < refinements.size(); ++k) {
        const double rdt = refinements[k - 1].first / refinements[k].first;
        const double rdx2 = refinements[k - 1].second * refinements[k - 1].second /
                            (refinements[k].second * refinements[k].second);
        if (std::abs(rdt - 2.0) > 0.1 || std::abs(rdx2 - 2.0) > 0.1)
            throw std::invalid_argument(
                "convergence_study: levels must halve dt and dx^2 together");
    }
    if (!(b.t_end > b.t0))
        throw std::invalid_argument("convergence_study: t_end must exceed t0");

    SelfSimilarProfile prof{};
    if (b.kind == BenchmarkKind::SelfSimilar) {
        if (!(b.t0 > 0.0))
            throw std::invalid_argument("convergence_study: self-similar benchmark needs t0 > 0");
        prof = build_profile(b.parameter, b.alpha);
    }

    auto s_exact = [&](double t) {
        return b.kind == BenchmarkKind::TravelingWave ? b.parameter * t
                                                      : prof.sigma * std::sqrt(t);
    };
    // Lab-frame exact solution extended by zero left of the front.
    auto u_exact = [&](double x, double t) {
        if (b.kind == BenchmarkKind::TravelingWave) {
            const double xi = x - b.parameter * t;
            return xi <= 0.0 ? 0.0
                             : b.alpha / b.parameter * (1.0 - std::exp(-b.parameter * xi));
        }
        const double y = x / std::sqrt(t);
        return y <= prof.sigma ? 0.0 : std::sqrt(t) * eval_w(prof, y);
    };

    std::vector<ConvergenceRow> rows;
    for (const auto& [dt, dx_req] : refinements) {
        SolverParams prm = base;
        prm.alpha = b.alpha;
        prm.grid = Grid1D{b.L, static_cast<int>(std::llround(b.L / dx_req))};
        validate_grid(prm.grid, "convergence_study");

        FieldSnapshot u0;
        double sdot0;
        if (b.kind == BenchmarkKind::TravelingWave) {
            u0 = traveling_wave_snapshot(b.alpha, b.parameter, prm.grid, b.t0);
            sdot0 = b.parameter;
        } else {
            u0 = self_similar_snapshot(prof, b.t0, prm.grid);
            sdot0 = prof.sigma / (2.0 * std::sqrt(b.t0));
        }

        SolveReport rep = solve(u0, s_exact(b.t0), b.t_end, dt, benchmark_source(b), prm, sdot0);
        if (rep.status != SolveStatus::Completed)
            throw std::runtime_error(std::string("convergence_study: benchmark run failed: ") +
                                     rep.failure_message);

        ConvergenceRow row;
        row.dt = dt;
        row.dx = prm.grid.dx();
        for (const auto& fr : rep.fronts)
            row.front_error = std::max(row.front_error, std::abs(fr.s - s_exact(fr.t)));
        for (const auto& snap : rep.snapshots) {
            // Locate the front the solver had at this snapshot time.
            double s_num = 0.0;
            for (const auto& fr : rep.fronts)
                if (fr.t <= snap.t + 1e-14) s_num = fr.s;
            for (int i = 0; i < prm.grid.nodes(); ++i) {
                const double x_lab = i * prm.grid.dx() + s_num;
                row.field_error = std::max(
                    row.field_error, std::abs(snap.values[i] - u_exact(x_lab, snap.t)));
            }
        }
        if (!rows.empty())
            row.observed_order = std::log2(rows.back().front_error / row.front_error);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fblab
