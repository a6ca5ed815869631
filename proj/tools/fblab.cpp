// Command line front end: exact self-similar benchmarks, the front-tracking
// solver, the Laplace non-existence probe, benchmark convergence studies and
// the Arrhenius-regularized model.  Every run writes CSV files that begin
// with '#'-prefixed metadata echoing the resolved configuration, so a file
// documents the run that produced it and reruns are byte-identical.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 flux infeasible,
// 3 negativity detected.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "fblab/fblab.hpp"

namespace fs = std::filesystem;
using Meta = std::vector<std::pair<std::string, std::string>>;

namespace {

// Short human format for labels and file names ("0.2", not 17 digits).
std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

fblab::SourceTerm parse_source(const std::string& spec) {
    if (spec == "zero") return fblab::SourceTerm::zero();
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const double v = std::stod(spec.substr(colon + 1));
        if (kind == "const") return fblab::SourceTerm::constant(v);
        if (kind == "invsqrt") return fblab::SourceTerm::inverse_sqrt_time(v);
    }
    throw std::invalid_argument("--source: expected zero, const:VALUE or invsqrt:VALUE");
}

int status_exit_code(fblab::SolveStatus s) {
    switch (s) {
        case fblab::SolveStatus::Completed: return 0;
        case fblab::SolveStatus::FluxInfeasible: return 2;
        case fblab::SolveStatus::NegativityDetected: return 3;
    }
    return 1;
}

// ---------------------------------------------------------------------------

struct SelfsimOpts {
    double h = 1.0, alpha = 1.0, span = 10.0;
    int points = 401;
    std::string sweep;  // "H_MIN:H_MAX:COUNT", log-spaced
    std::string out = "out";
    bool svg = false;
};

int run_selfsim(const SelfsimOpts& o) {
    fs::create_directories(o.out);
    Meta meta{{"command", "selfsim"},
              {"h", fblab::csv::num(o.h)},
              {"alpha", fblab::csv::num(o.alpha)},
              {"sweep", o.sweep.empty() ? "none" : o.sweep},
              {"span", fblab::csv::num(o.span)},
              {"points", std::to_string(o.points)}};

    if (!o.sweep.empty()) {
        double h_min, h_max;
        int count;
        if (std::sscanf(o.sweep.c_str(), "%lf:%lf:%d", &h_min, &h_max, &count) != 3 ||
            !(h_min > 0.0) || !(h_max > h_min) || count < 2)
            throw std::invalid_argument("--sweep: expected H_MIN:H_MAX:COUNT with 0 < H_MIN < H_MAX");
        fblab::csv::Writer sig(o.out + "/sigma.csv", meta, {"h", "alpha", "sigma", "c1"});
        std::vector<double> hs, sigmas;
        for (int k = 0; k < count; ++k) {
            const double h = h_min * std::pow(h_max / h_min, double(k) / (count - 1));
            const auto p = fblab::build_profile(h, o.alpha);
            sig.row({p.h, p.alpha, p.sigma, p.c1});
            hs.push_back(h);
            sigmas.push_back(p.sigma);
        }
        std::cout << "selfsim sweep: " << count << " profiles, sigma from "
                  << fblab::csv::num(sigmas.front()) << " to "
                  << fblab::csv::num(sigmas.back()) << "\n";
        if (o.svg)
            fblab::svg::write_line_plot(o.out + "/sigma.svg", "front slope vs source amplitude",
                                        "h", "sigma", {{"sigma(h)", hs, sigmas}});
        return 0;
    }

    const auto p = fblab::build_profile(o.h, o.alpha);
    {
        fblab::csv::Writer sig(o.out + "/sigma.csv", meta, {"h", "alpha", "sigma", "c1"});
        sig.row({p.h, p.alpha, p.sigma, p.c1});
    }
    {
        fblab::csv::Writer prof(o.out + "/profile.csv", meta,
                                {"y", "w", "w_prime", "residual"});
        std::vector<double> ys, ws, wps;
        for (int i = 0; i < o.points; ++i) {
            const double y = p.sigma + o.span * i / (o.points - 1);
            const double w = fblab::eval_w(p, y);
            const double wp = fblab::eval_w_prime(p, y);
            const double wpp = fblab::eval_w_second(p, y);
            prof.row({y, w, wp, 0.5 * w - 0.5 * y * wp - wpp - o.h});
            ys.push_back(y);
            ws.push_back(w);
            wps.push_back(wp);
        }
        if (o.svg)
            fblab::svg::write_line_plot(o.out + "/profile.svg", "self-similar profile",
                                        "y", "w", {{"w", ys, ws}, {"w'", ys, wps}});
    }
    std::cout << "sigma = " << fblab::csv::num(p.sigma)
              << "\nc1 = " << fblab::csv::num(p.c1) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct SolveOpts {
    std::string preset;  // "", "traveling-wave", "selfsim"
    double c = 1.0, h = 1.0, alpha = 1.0, L = 20.0, dt = 1e-3;
    double t0 = -1.0;  // <0: preset-dependent default (0, or 0.25 for selfsim)
    double t_end = 1.0, s0 = 0.0, tol_flux = 1e-9;
    int n = 800, stride = 10;
    std::string source = "zero";
    std::string out = "out";
    bool svg = false;
};

int run_solve(const SolveOpts& o) {
    fs::create_directories(o.out);
    fblab::SolverParams prm;
    prm.grid = fblab::Grid1D{o.L, o.n};
    prm.alpha = o.alpha;
    prm.tol_flux = o.tol_flux;
    prm.snapshot_stride = o.stride;

    double t0 = o.t0;
    fblab::FieldSnapshot u0;
    fblab::SourceTerm src = fblab::SourceTerm::zero();
    double s0 = o.s0, sdot0 = 0.0;
    bool have_exact = false;
    std::function<double(double)> s_exact;

    fblab::SelfSimilarProfile prof{};
    if (o.preset == "traveling-wave") {
        if (t0 < 0.0) t0 = 0.0;
        u0 = fblab::traveling_wave_snapshot(o.alpha, o.c, prm.grid, t0);
        s0 = o.c * t0;
        sdot0 = o.c;
        have_exact = true;
        s_exact = [c = o.c](double t) { return c * t; };
    } else if (o.preset == "selfsim") {
        if (t0 < 0.0) t0 = 0.25;
        prof = fblab::build_profile(o.h, o.alpha);
        u0 = fblab::self_similar_snapshot(prof, t0, prm.grid);
        src = fblab::SourceTerm::inverse_sqrt_time(o.h);
        s0 = prof.sigma * std::sqrt(t0);
        sdot0 = prof.sigma / (2.0 * std::sqrt(t0));
        have_exact = true;
        s_exact = [sg = prof.sigma](double t) { return sg * std::sqrt(t); };
    } else if (o.preset.empty()) {
        if (t0 < 0.0) t0 = 0.0;
        u0 = fblab::FieldSnapshot{t0, std::vector<double>(prm.grid.nodes(), 0.0)};
        src = parse_source(o.source);
    } else {
        throw std::invalid_argument("--preset: expected traveling-wave or selfsim");
    }

    const auto rep = fblab::solve(u0, s0, o.t_end, o.dt, src, prm, sdot0);

    Meta meta{{"command", "solve"},
              {"preset", o.preset.empty() ? "none" : o.preset},
              {"source", o.preset == "selfsim" ? "invsqrt:" + short_num(o.h)
               : o.preset == "traveling-wave" ? "zero"
                                              : o.source},
              {"alpha", fblab::csv::num(o.alpha)},
              {"c", fblab::csv::num(o.c)},
              {"h", fblab::csv::num(o.h)},
              {"L", fblab::csv::num(o.L)},
              {"n", std::to_string(o.n)},
              {"dt", fblab::csv::num(o.dt)},
              {"t0", fblab::csv::num(t0)},
              {"t_end", fblab::csv::num(o.t_end)},
              {"s0", fblab::csv::num(s0)},
              {"tol_flux", fblab::csv::num(o.tol_flux)},
              {"stride", std::to_string(o.stride)},
              {"status", fblab::to_string(rep.status)}};

    {
        std::vector<std::string> cols{"t", "s", "sdot", "flux_residual", "min_U", "max_U"};
        if (have_exact) cols.push_back("front_error");
        fblab::csv::Writer fronts(o.out + "/fronts.csv", meta, cols);
        for (std::size_t k = 0; k < rep.fronts.size(); ++k) {
            const auto& fr = rep.fronts[k];
            const auto& dg = rep.diagnostics[k];
            if (have_exact)
                fronts.row({fr.t, fr.s, fr.sdot, dg.flux_residual, dg.min_u, dg.max_u,
                            std::abs(fr.s - s_exact(fr.t))});
            else
                fronts.row({fr.t, fr.s, fr.sdot, dg.flux_residual, dg.min_u, dg.max_u});
        }
    }
    {
        // Long format, lab-frame abscissa x = (node offset) + s(t).
        fblab::csv::Writer fields(o.out + "/fields.csv", meta, {"t", "x", "u"});
        std::size_t fi = 0;
        for (const auto& snap : rep.snapshots) {
            while (fi + 1 < rep.fronts.size() && rep.fronts[fi].t < snap.t - 1e-14) ++fi;
            const double s = rep.fronts[fi].s;
            for (int i = 0; i < prm.grid.nodes(); ++i)
                fields.row({snap.t, i * prm.grid.dx() + s, snap.values[i]});
        }
    }
    if (o.svg) {
        std::vector<double> ts, ss, se;
        for (const auto& fr : rep.fronts) {
            ts.push_back(fr.t);
            ss.push_back(fr.s);
            if (have_exact) se.push_back(s_exact(fr.t));
        }
        std::vector<fblab::svg::Series> series{{"computed s(t)", ts, ss}};
        if (have_exact) series.push_back({"exact s(t)", ts, se});
        fblab::svg::write_line_plot(o.out + "/fronts.svg", "front trajectory", "t", "s", series);
    }

    std::cout << "status = " << fblab::to_string(rep.status)
              << ", steps = " << rep.fronts.size() - 1
              << ", final t = " << fblab::csv::num(rep.fronts.back().t)
              << ", final s = " << fblab::csv::num(rep.fronts.back().s) << "\n";
    if (rep.status != fblab::SolveStatus::Completed)
        std::cerr << "fblab solve: " << rep.failure_message << "\n";
    return status_exit_code(rep.status);
}

// ---------------------------------------------------------------------------

struct ProbeOpts {
    double lambda = 0.0;  // 0: use the threshold 2||f||_inf/alpha
    double alpha = 1.0, t = 1.0, gap = 0.0, lambda_min = 0.1, quad_tol = 1e-10;
    std::string source = "const:1";
    std::string out = "out";
};

int run_probe(const ProbeOpts& o) {
    fs::create_directories(o.out);
    const auto src = parse_source(o.source);

    const double threshold = src.bounded()
                                 ? 2.0 * src.sup() / o.alpha
                                 : std::numeric_limits<double>::infinity();
    double lambda = o.lambda;
    if (!(lambda > 0.0)) {
        if (!src.bounded())
            throw std::invalid_argument(
                "probe: the threshold 2||f||_inf/alpha is infinite for an unbounded "
                "source; pass --lambda explicitly or use a bounded source");
        lambda = std::max(threshold, o.lambda_min);
    }
    std::cout << "lambda_threshold = " << fblab::csv::num(threshold)
              << ", lambda = " << fblab::csv::num(lambda) << "\n";

    Meta meta{{"command", "probe"},
              {"source", o.source},
              {"alpha", fblab::csv::num(o.alpha)},
              {"t", fblab::csv::num(o.t)},
              {"lambda", fblab::csv::num(lambda)},
              {"lambda_threshold", fblab::csv::num(threshold)},
              {"gap", o.gap > 0.0 ? fblab::csv::num(o.gap) : "none"},
              {"quad_tol", fblab::csv::num(o.quad_tol)}};

    fblab::csv::Writer wit(o.out + "/witness.csv", meta,
                           {"trajectory_id", "lambda", "t", "scaled_u_hat", "certificate"});
    for (const auto& [id, traj] : fblab::preset_trajectories()) {
        fblab::ProbeQuery q;
        q.lambda = lambda;
        q.alpha = o.alpha;
        q.t = o.t;
        q.trajectory = traj;
        q.src = src;
        const auto r = o.gap > 0.0
                           ? fblab::probe_interval(q, [g = o.gap](double) { return g; }, o.quad_tol)
                           : fblab::probe_formula(q, o.quad_tol);
        wit.row_cells({id, fblab::csv::num(lambda), fblab::csv::num(o.t),
                       fblab::csv::num(r.scaled_u_hat), fblab::to_string(r.sign_certificate)});
        std::cout << id << ": scaled_u_hat = " << fblab::csv::num(r.scaled_u_hat) << " ("
                  << fblab::to_string(r.sign_certificate) << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ConvergenceOpts {
    std::string benchmark = "traveling-wave";
    double c = 1.0, h = 1.0, alpha = 1.0, L = 20.0;
    double dt0 = 1e-2, dx0 = 0.05, t0 = -1.0, t_end = 1.0;
    int levels = 4;
    std::string out = "out";
    bool svg = false;
};

int run_convergence(const ConvergenceOpts& o) {
    fs::create_directories(o.out);
    fblab::Benchmark b;
    if (o.benchmark == "traveling-wave")
        b = fblab::traveling_wave_benchmark(o.c, o.alpha);
    else if (o.benchmark == "selfsim")
        b = fblab::self_similar_benchmark(o.h, o.alpha);
    else
        throw std::invalid_argument("--benchmark: expected traveling-wave or selfsim");
    b.L = o.L;
    b.t_end = o.t_end;
    if (o.t0 >= 0.0) b.t0 = o.t0;

    std::vector<std::pair<double, double>> refinements;
    for (int k = 0; k < o.levels; ++k)
        refinements.emplace_back(o.dt0 / std::pow(2.0, k), o.dx0 / std::pow(2.0, 0.5 * k));

    const auto rows = fblab::convergence_study(b, refinements);

    Meta meta{{"command", "convergence"},
              {"benchmark", o.benchmark},
              {"parameter", fblab::csv::num(b.parameter)},
              {"alpha", fblab::csv::num(b.alpha)},
              {"L", fblab::csv::num(b.L)},
              {"t0", fblab::csv::num(b.t0)},
              {"t_end", fblab::csv::num(b.t_end)},
              {"dt0", fblab::csv::num(o.dt0)},
              {"dx0", fblab::csv::num(o.dx0)},
              {"levels", std::to_string(o.levels)}};
    fblab::csv::Writer out(o.out + "/convergence.csv", meta,
                           {"dt", "dx", "front_error", "field_error", "observed_order"});
    std::vector<double> dts, fes;
    for (const auto& r : rows) {
        out.row({r.dt, r.dx, r.front_error, r.field_error, r.observed_order});
        std::cout << "dt = " << short_num(r.dt) << ", dx = " << short_num(r.dx)
                  << ": front_error = " << fblab::csv::num(r.front_error)
                  << ", field_error = " << fblab::csv::num(r.field_error)
                  << ", order = " << short_num(r.observed_order) << "\n";
        dts.push_back(std::log2(r.dt));
        fes.push_back(std::log2(r.front_error));
    }
    if (o.svg)
        fblab::svg::write_line_plot(o.out + "/convergence.svg",
                                    "front error vs step (log2-log2)", "log2 dt",
                                    "log2 front error", {{o.benchmark, dts, fes}});
    return 0;
}

// ---------------------------------------------------------------------------

struct ArrheniusOpts {
    std::vector<double> eps{0.2, 0.1, 0.05};
    double L = 10.0, dt = 0.0, t_end = 0.5;  // dt 0: 0.9 * stability limit per eps
    int n = 200;
    std::string source = "const:1";
    std::string out = "out";
    bool svg = false;
};

int run_arrhenius(const ArrheniusOpts& o) {
    fs::create_directories(o.out);
    const auto src = parse_source(o.source);
    std::vector<fblab::svg::Series> min_series;
    for (double eps : o.eps) {
        const fblab::ArrheniusKernel kernel(eps);
        const double dt = o.dt > 0.0 ? o.dt : 0.9 * kernel.suggested_dt();
        const fblab::Grid1D grid{o.L, o.n};
        const auto rep = fblab::solve_regularized(
            std::vector<double>(grid.nodes(), 0.0), src, eps, grid, dt, o.t_end);

        Meta meta{{"command", "arrhenius"},
                  {"eps", fblab::csv::num(eps)},
                  {"normalizer", fblab::csv::num(kernel.normalizer())},
                  {"source", o.source},
                  {"L", fblab::csv::num(o.L)},
                  {"n", std::to_string(o.n)},
                  {"dt", fblab::csv::num(dt)},
                  {"t_end", fblab::csv::num(o.t_end)}};
        const std::string path = o.out + "/arrhenius_eps" + short_num(eps) + ".csv";
        fblab::csv::Writer out(path, meta, {"t", "min_u", "mass", "sink_total"});
        std::vector<double> ts, mins;
        for (const auto& row : rep.series) {
            out.row({row.t, row.min_u, row.mass, row.sink_total});
            ts.push_back(row.t);
            mins.push_back(row.min_u);
        }
        min_series.push_back({"eps=" + short_num(eps), ts, mins});
        std::cout << "eps = " << short_num(eps) << ": final mass = "
                  << fblab::csv::num(rep.series.back().mass)
                  << ", sink_total = " << fblab::csv::num(rep.series.back().sink_total)
                  << ", max balance residual = "
                  << fblab::csv::num(rep.max_balance_residual) << "\n";
    }
    if (o.svg)
        fblab::svg::write_line_plot(o.out + "/arrhenius.svg", "regularized minimum vs time",
                                    "t", "min u", min_series);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fblab: numerical laboratory for a 1-d parabolic free-boundary problem\n"
                 "(heat flow with prescribed flux alpha at a moving front)"};
    app.require_subcommand(1);
    // Help is --help only: a short -h would shadow the --h option below.
    app.set_help_flag("--help", "print usage and exit");
    app.set_config("--config", "", "key=value config file; command line flags override it");

    SelfsimOpts so;
    auto* c_selfsim = app.add_subcommand("selfsim", "exact self-similar benchmark profiles");
    c_selfsim->add_option("--h", so.h, "source amplitude of f = h/sqrt(t)")->capture_default_str();
    c_selfsim->add_option("--alpha", so.alpha, "front flux")->capture_default_str();
    c_selfsim->add_option("--sweep", so.sweep, "H_MIN:H_MAX:COUNT log-spaced sweep");
    c_selfsim->add_option("--span", so.span, "profile span above sigma")->capture_default_str();
    c_selfsim->add_option("--points", so.points, "profile sample count")->capture_default_str();
    c_selfsim->add_option("--out", so.out, "output directory")->capture_default_str();
    c_selfsim->add_flag("--svg", so.svg, "also write SVG plots");

    SolveOpts vo;
    auto* c_solve = app.add_subcommand("solve", "front-tracking PDE solver");
    c_solve->add_option("--preset", vo.preset, "traveling-wave or selfsim benchmark setup");
    c_solve->add_option("--c", vo.c, "traveling wave speed")->capture_default_str();
    c_solve->add_option("--h", vo.h, "self-similar source amplitude")->capture_default_str();
    c_solve->add_option("--alpha", vo.alpha, "front flux")->capture_default_str();
    c_solve->add_option("--L", vo.L, "domain length ahead of the front")->capture_default_str();
    c_solve->add_option("--n", vo.n, "grid cells")->capture_default_str();
    c_solve->add_option("--dt", vo.dt, "time step")->capture_default_str();
    c_solve->add_option("--t0", vo.t0, "start time (default 0; 0.25 for selfsim preset)");
    c_solve->add_option("--t-end", vo.t_end, "end time")->capture_default_str();
    c_solve->add_option("--s0", vo.s0, "initial front position (no preset)")->capture_default_str();
    c_solve->add_option("--source", vo.source, "zero, const:VALUE or invsqrt:VALUE")
        ->capture_default_str();
    c_solve->add_option("--tol-flux", vo.tol_flux, "flux residual tolerance")->capture_default_str();
    c_solve->add_option("--stride", vo.stride, "keep every k-th snapshot")->capture_default_str();
    c_solve->add_option("--out", vo.out, "output directory")->capture_default_str();
    c_solve->add_flag("--svg", vo.svg, "also write SVG plots");

    ProbeOpts po;
    auto* c_probe = app.add_subcommand("probe", "Laplace-transform non-existence probe");
    c_probe->add_option("--lambda", po.lambda, "transform variable (default: threshold)");
    c_probe->add_option("--alpha", po.alpha, "front flux")->capture_default_str();
    c_probe->add_option("--t", po.t, "probe time")->capture_default_str();
    c_probe->add_option("--gap", po.gap, "interval width (0: half-line probe)")
        ->capture_default_str();
    c_probe->add_option("--lambda-min", po.lambda_min, "lower bound for auto lambda")
        ->capture_default_str();
    c_probe->add_option("--quad-tol", po.quad_tol, "quadrature tolerance")->capture_default_str();
    c_probe->add_option("--source", po.source, "zero, const:VALUE or invsqrt:VALUE")
        ->capture_default_str();
    c_probe->add_option("--out", po.out, "output directory")->capture_default_str();

    ConvergenceOpts co;
    auto* c_conv = app.add_subcommand("convergence", "benchmark refinement study");
    c_conv->add_option("--benchmark", co.benchmark, "traveling-wave or selfsim")
        ->capture_default_str();
    c_conv->add_option("--c", co.c, "traveling wave speed")->capture_default_str();
    c_conv->add_option("--h", co.h, "self-similar source amplitude")->capture_default_str();
    c_conv->add_option("--alpha", co.alpha, "front flux")->capture_default_str();
    c_conv->add_option("--L", co.L, "domain length")->capture_default_str();
    c_conv->add_option("--dt0", co.dt0, "coarsest time step")->capture_default_str();
    c_conv->add_option("--dx0", co.dx0, "coarsest spacing")->capture_default_str();
    c_conv->add_option("--t0", co.t0, "start time (default: benchmark-dependent)");
    c_conv->add_option("--t-end", co.t_end, "end time")->capture_default_str();
    c_conv->add_option("--levels", co.levels, "refinement levels")->capture_default_str();
    c_conv->add_option("--out", co.out, "output directory")->capture_default_str();
    c_conv->add_flag("--svg", co.svg, "also write SVG plots");

    ArrheniusOpts ao;
    auto* c_arr = app.add_subcommand("arrhenius", "regularized (smoothed-sink) runs");
    c_arr->add_option("--eps", ao.eps, "regularization widths")->capture_default_str();
    c_arr->add_option("--L", ao.L, "domain length")->capture_default_str();
    c_arr->add_option("--n", ao.n, "grid cells")->capture_default_str();
    c_arr->add_option("--dt", ao.dt, "time step (0: 90% of the stability limit)")
        ->capture_default_str();
    c_arr->add_option("--t-end", ao.t_end, "end time")->capture_default_str();
    c_arr->add_option("--source", ao.source, "zero, const:VALUE or invsqrt:VALUE")
        ->capture_default_str();
    c_arr->add_option("--out", ao.out, "output directory")->capture_default_str();
    c_arr->add_flag("--svg", ao.svg, "also write SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*c_selfsim) return run_selfsim(so);
        if (*c_solve) return run_solve(vo);
        if (*c_probe) return run_probe(po);
        if (*c_conv) return run_convergence(co);
        if (*c_arr) return run_arrhenius(ao);
    } catch (const std::exception& e) {
        std::cerr << "fblab: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
