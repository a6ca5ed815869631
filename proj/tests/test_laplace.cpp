#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fblab/erfc.hpp"
#include "fblab/laplace.hpp"
#include "fblab/selfsim.hpp"

using Catch::Approx;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

fblab::ProbeQuery make_query(double lambda, double alpha, double t,
                             fblab::Trajectory traj, fblab::SourceTerm src) {
    fblab::ProbeQuery q;
    q.lambda = lambda;
    q.alpha = alpha;
    q.t = t;
    q.trajectory = std::move(traj);
    q.src = std::move(src);
    return q;
}

fblab::Trajectory resting_at(double s0) {
    return fblab::Trajectory::from_callable([s0](double) { return s0; });
}

}  // namespace

TEST_CASE("g_hat closed forms", "[laplace]") {
    const auto rest = resting_at(0.3);
    SECTION("zero and constant sources") {
        CHECK(fblab::g_hat(fblab::SourceTerm::zero(), rest, 1.7, 0.4) == 0.0);
        CHECK(fblab::g_hat(fblab::SourceTerm::constant(0.8), rest, 2.0, 0.4) ==
              Approx(0.4).epsilon(1e-14));
    }
    SECTION("1/sqrt(t) source") {
        CHECK(fblab::g_hat(fblab::SourceTerm::inverse_sqrt_time(2.0), rest, 2.0, 0.25) ==
              Approx(2.0).epsilon(1e-14));  // h/(lambda sqrt(sigma)) = 2/(2*0.5)
        CHECK_THROWS_AS(
            fblab::g_hat(fblab::SourceTerm::inverse_sqrt_time(1.0), rest, 2.0, 0.0),
            std::domain_error);
    }
    SECTION("lambda must be positive") {
        CHECK_THROWS_AS(fblab::g_hat(fblab::SourceTerm::zero(), rest, 0.0, 0.4),
                        std::invalid_argument);
    }
    SECTION("constant table reproduces the constant source") {
        const auto tab = fblab::SourceTerm::tabulated({0.0, 10.0}, {1.0, 1.0});
        for (double lam : {0.5, 1.0, 3.0})
            CHECK(fblab::g_hat(tab, rest, lam, 0.4) == Approx(1.0 / lam).epsilon(1e-9));
    }
    SECTION("linear table against the analytic integral") {
        // f(x) = 1 - x/10 on [0, 10], constant 0 past the table; front at 0.3.
        const auto tab = fblab::SourceTerm::tabulated({0.0, 10.0}, {1.0, 0.0});
        const double s = 0.3, lam = 1.3;
        const double a = 1.0 - s / 10.0, b = 0.1, c = 10.0 - s;
        const double e = std::exp(-lam * c);
        const double exact = a * (1.0 - e) / lam -
                             b * (1.0 / (lam * lam) - e * (c / lam + 1.0 / (lam * lam)));
        CHECK(fblab::g_hat(tab, rest, lam, 0.4) == Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("probe closed form for a resting front and constant source", "[laplace]") {
    // s constant: scaled = (c/lambda - alpha)(1 - e^{-lambda^2 t}) e^{-lambda s0} / lambda^2.
    SECTION("frozen spot value") {
        const auto r = fblab::probe_formula(
            make_query(2.0, 1.0, 0.5, resting_at(0.3), fblab::SourceTerm::constant(1.0)));
        CHECK(rel_err(r.scaled_u_hat, -0.05931725723496156) < 1e-10);
        CHECK(r.sign_certificate == fblab::SignCertificate::Negative);
        CHECK(r.lambda_threshold == Approx(2.0).margin(1e-15));
        CHECK(r.u_hat_valid);
        // unscaled transform is e^{lambda^2 t + lambda s(t)} times the scaled one
        CHECK(rel_err(r.u_hat,
                      std::exp(4.0 * 0.5 + 2.0 * 0.3) * r.scaled_u_hat) < 1e-12);
    }
    SECTION("sweep against the analytic expression") {
        for (double lam : {0.5, 1.0, 2.0, 4.0}) {
            for (double t : {0.1, 0.5, 1.0}) {
                const double c = 0.4, alpha = 1.0, s0 = -0.2;
                const auto r = fblab::probe_formula(
                    make_query(lam, alpha, t, resting_at(s0), fblab::SourceTerm::constant(c)));
                const double exact = -(c / lam - alpha) * std::expm1(-lam * lam * t) *
                                     std::exp(-lam * s0) / (lam * lam);
                INFO("lambda = " << lam << ", t = " << t);
                CHECK(rel_err(r.scaled_u_hat, exact) < 1e-9);
            }
        }
    }
}

TEST_CASE("probe closed form for the 1/sqrt(t) source on a resting front", "[laplace]") {
    // scaled = h sqrt(pi) erf(lambda sqrt t) / lambda^2 - alpha (1 - e^{-lambda^2 t}) / lambda^2.
    const double kSqrtPi = 1.7724538509055160273;
    for (double lam : {1.0, 2.0, 3.0}) {
        for (double t : {0.25, 0.5, 1.0}) {
            const double h = 1.0, alpha = 1.0;
            const auto r = fblab::probe_formula(make_query(
                lam, alpha, t, resting_at(0.0), fblab::SourceTerm::inverse_sqrt_time(h)));
            const double erf_val = 1.0 - fblab::erfc(lam * std::sqrt(t));
            const double exact = h * kSqrtPi * erf_val / (lam * lam) +
                                 alpha * std::expm1(-lam * lam * t) / (lam * lam);
            INFO("lambda = " << lam << ", t = " << t);
            CHECK(rel_err(r.scaled_u_hat, exact) < 1e-9);
            CHECK(std::isinf(r.lambda_threshold));  // unbounded source
        }
    }
}

TEST_CASE("probe at t = 0 is the empty integral", "[laplace]") {
    const auto r = fblab::probe_formula(
        make_query(2.0, 1.0, 0.0, resting_at(0.0), fblab::SourceTerm::constant(1.0)));
    CHECK(r.u_hat == 0.0);
    CHECK(r.scaled_u_hat == 0.0);
    CHECK(r.u_hat_valid);
    CHECK(r.sign_certificate == fblab::SignCertificate::NonNegative);
}

TEST_CASE("past the threshold every trajectory certifies negativity", "[laplace]") {
    // g_hat - alpha <= ||f||/lambda - alpha = -alpha/2 at the threshold, so
    // scaled <= -(alpha/2) int_0^t e^{-lambda^2 sig - lambda s(sig)} dsig.
    const double alpha = 1.0, c = 1.0;
    const auto src = fblab::SourceTerm::constant(c);
    const double lambda = 2.0 * c / alpha;
    for (const auto& [id, traj] : fblab::preset_trajectories()) {
        for (double t : {0.2, 1.0}) {
            const auto r = fblab::probe_formula(make_query(lambda, alpha, t, traj, src));
            INFO("trajectory = " << id << ", t = " << t);
            CHECK(r.sign_certificate == fblab::SignCertificate::Negative);
            // integrated in v = sqrt(sigma) so the -sqrt(t) front is smooth
            const double weight = fblab::integrate(
                [&](double v) {
                    const double sig = v * v;
                    return 2.0 * v * std::exp(-lambda * lambda * sig - lambda * traj(sig));
                },
                0.0, std::sqrt(t), 1e-12);
            CHECK(r.scaled_u_hat <= -0.5 * alpha * weight + 1e-9);
        }
    }
}

TEST_CASE("interval probe sits strictly below the half-line probe", "[laplace]") {
    const auto traj = fblab::preset_trajectories()[3].second;  // sine
    const auto src = fblab::SourceTerm::constant(0.3);
    const std::function<double(double)> gap = [](double) { return 0.8; };
    int pairs = 0;
    for (double lam : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        for (double t : {0.25, 1.0}) {
            const auto full = fblab::probe_formula(make_query(lam, 1.0, t, traj, src));
            const auto part = fblab::probe_interval(make_query(lam, 1.0, t, traj, src), gap);
            INFO("lambda = " << lam << ", t = " << t);
            CHECK(part.scaled_u_hat < full.scaled_u_hat);
            ++pairs;
        }
    }
    CHECK(pairs == 10);
}

TEST_CASE("interval probe closed form and wide-gap limit", "[laplace]") {
    SECTION("frozen spot value, constant gap 1") {
        // extra term -alpha e^{-lambda d} under the same resting-front weight
        const auto r = fblab::probe_interval(
            make_query(2.0, 1.0, 0.5, resting_at(0.3), fblab::SourceTerm::constant(1.0)),
            [](double) { return 1.0; });
        CHECK(rel_err(r.scaled_u_hat, -0.07537269285238664) < 1e-10);
        CHECK(r.sign_certificate == fblab::SignCertificate::Negative);
    }
    SECTION("gap -> inf recovers the half-line probe") {
        const auto q = make_query(1.0, 1.0, 1.0, fblab::preset_trajectories()[3].second,
                                  fblab::SourceTerm::constant(0.3));
        const auto full = fblab::probe_formula(q);
        const auto wide = fblab::probe_interval(q, [](double) { return 100.0; });
        CHECK(std::abs(wide.scaled_u_hat - full.scaled_u_hat) <= 1e-12);
    }
    SECTION("gap must stay positive") {
        const auto q = make_query(1.0, 1.0, 1.0, resting_at(0.0),
                                  fblab::SourceTerm::constant(0.3));
        CHECK_THROWS_AS(fblab::probe_interval(q, [](double t) { return 0.5 - t; }),
                        std::domain_error);
        CHECK_THROWS_AS(fblab::probe_interval(q, std::function<double(double)>{}),
                        std::invalid_argument);
    }
}

TEST_CASE("agreement with the exact self-similar transform", "[laplace]") {
    const auto p = fblab::build_profile(1.0, 1.0);
    const auto traj =
        fblab::Trajectory::from_callable([&](double t) { return fblab::eval_s(p, t); });
    const auto src = fblab::SourceTerm::inverse_sqrt_time(1.0);

    SECTION("frozen spot values at lambda = 2, t = 1/2") {
        const auto r = fblab::probe_formula(make_query(2.0, 1.0, 0.5, traj, src));
        CHECK(rel_err(r.u_hat, 0.2096207393422185) < 1e-10);
        CHECK(rel_err(r.scaled_u_hat, 0.30800128057118947) < 1e-10);
        CHECK(r.sign_certificate == fblab::SignCertificate::NonNegative);
    }
    SECTION("probe matches the numeric transform of the front-frame field") {
        for (double lam : {1.0, 2.0}) {
            const double t = 0.5;
            const auto r = fblab::probe_formula(make_query(lam, 1.0, t, traj, src));
            const double s_t = fblab::eval_s(p, t);
            const auto tr = fblab::transform_numeric(
                [&](double x) { return fblab::eval_u(p, x + s_t, t); }, lam, 60.0, 1e-8);
            INFO("lambda = " << lam);
            CHECK(rel_err(r.u_hat, tr.value) < 1e-6);
        }
    }
}

TEST_CASE("finite-window transform with rigorous tail bound", "[laplace]") {
    SECTION("U(x) = x at lambda = 1") {
        const auto r = fblab::transform_numeric([](double x) { return x; }, 1.0, 40.0);
        CHECK(rel_err(r.value, 1.0) < 1e-9);
        CHECK(r.tail_bound <= 1e-10);
    }
    SECTION("window too small for the requested tolerance") {
        CHECK_THROWS_AS(fblab::transform_numeric([](double x) { return x; }, 1.0, 5.0, 1e-10),
                        std::invalid_argument);
    }
    SECTION("sampled field overload") {
        std::vector<double> xs, us;
        for (int i = 0; i <= 4000; ++i) {
            const double x = 40.0 * i / 4000.0;
            xs.push_back(x);
            us.push_back(x * std::exp(-x));
        }
        for (double lam : {1.0, 2.0}) {
            const auto r = fblab::transform_numeric(xs, us, lam, 1e-6);
            CHECK(rel_err(r.value, 1.0 / ((1.0 + lam) * (1.0 + lam))) < 1e-4);
        }
    }
    SECTION("argument validation") {
        CHECK_THROWS_AS(fblab::transform_numeric(std::function<double(double)>{}, 1.0, 10.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(fblab::transform_numeric([](double) { return 0.0; }, 0.0, 10.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(fblab::transform_numeric([](double) { return 0.0; }, 1.0, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(fblab::transform_numeric([](double) { return 0.0; }, 1.0, 10.0, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("transform identity lambda^2 T(U) - U'(0) - lambda U(0) = T(U'')", "[laplace]") {
    struct Profile {
        const char* name;
        std::function<double(double)> u;
        std::function<double(double)> upp;
        double du0;
    };
    const std::vector<Profile> profiles = {
        {"x e^{-x}",
         [](double x) { return x * std::exp(-x); },
         [](double x) { return (x - 2.0) * std::exp(-x); },
         1.0},
        {"e^{-x} sin x",
         [](double x) { return std::exp(-x) * std::sin(x); },
         [](double x) { return -2.0 * std::exp(-x) * std::cos(x); },
         1.0},
    };
    for (const auto& prof : profiles) {
        for (double lam : {0.5, 1.0, 2.0}) {
            const auto tu = fblab::transform_numeric(prof.u, lam, 60.0, 1e-9);
            const auto tupp = fblab::transform_numeric(prof.upp, lam, 60.0, 1e-9);
            INFO(prof.name << " at lambda = " << lam);
            CHECK(std::abs(lam * lam * tu.value - prof.du0 - tupp.value) <= 1e-8);
        }
    }
}

TEST_CASE("witness table at the non-existence threshold", "[laplace]") {
    const auto rows = fblab::nonexistence_witness(fblab::SourceTerm::constant(1.0),
                                                  fblab::preset_trajectories(), 1.0, 1.0);
    REQUIRE(rows.size() == 4);
    const std::vector<std::string> ids = {"zero", "linear", "neg-sqrt", "sine"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        INFO("trajectory = " << rows[i].trajectory_id);
        CHECK(rows[i].trajectory_id == ids[i]);
        CHECK(rows[i].lambda == Approx(2.0).margin(1e-15));
        CHECK(rows[i].certificate == fblab::SignCertificate::Negative);
        CHECK(rows[i].scaled_u_hat <= -1e-6);
    }
    SECTION("lambda floor applies to weak sources") {
        const auto weak = fblab::nonexistence_witness(fblab::SourceTerm::constant(0.01),
                                                      fblab::preset_trajectories(), 1.0, 1.0);
        CHECK(weak.front().lambda == Approx(0.1).margin(1e-15));
    }
    SECTION("unbounded sources are refused") {
        CHECK_THROWS_WITH(
            fblab::nonexistence_witness(fblab::SourceTerm::inverse_sqrt_time(1.0),
                                        fblab::preset_trajectories(), 1.0, 1.0),
            Catch::Matchers::ContainsSubstring("unbounded"));
    }
    SECTION("parameter validation") {
        const auto src = fblab::SourceTerm::constant(1.0);
        const auto trajs = fblab::preset_trajectories();
        CHECK_THROWS_AS(fblab::nonexistence_witness(src, trajs, 0.0, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(fblab::nonexistence_witness(src, trajs, 1.0, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(fblab::nonexistence_witness(src, trajs, 1.0, 1.0, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("deep exponent shifts are handled", "[laplace]") {
    SECTION("unscaled transform overflows but the scaled value survives") {
        // back shift lambda^2 t = 900 > 700: u_hat is not representable.
        const auto r = fblab::probe_formula(
            make_query(30.0, 1.0, 1.0, resting_at(0.0), fblab::SourceTerm::zero()));
        CHECK_FALSE(r.u_hat_valid);
        CHECK(std::isnan(r.u_hat));
        CHECK(rel_err(r.scaled_u_hat, -1.0 / 900.0) < 1e-6);
        CHECK(r.sign_certificate == fblab::SignCertificate::Negative);
    }
    SECTION("scaled value overflows; the sign still comes from the integral") {
        const auto plunge = fblab::Trajectory::from_callable(
            [](double t) { return -1000.0 * std::sin(3.14159 * t); });
        const auto r = fblab::probe_formula(
            make_query(2.0, 1.0, 1.0, plunge, fblab::SourceTerm::zero()));
        CHECK(std::isinf(r.scaled_u_hat));
        CHECK(r.sign_certificate == fblab::SignCertificate::Negative);
        CHECK_FALSE(r.note.empty());
    }
}

TEST_CASE("probe argument validation", "[laplace]") {
    const auto q0 = make_query(1.0, 1.0, 1.0, resting_at(0.0), fblab::SourceTerm::zero());
    auto bad = q0;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(fblab::probe_formula(bad), std::invalid_argument);
    bad = q0;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(fblab::probe_formula(bad), std::invalid_argument);
    bad = q0;
    bad.t = -0.5;
    CHECK_THROWS_AS(fblab::probe_formula(bad), std::invalid_argument);
    CHECK_THROWS_AS(fblab::probe_formula(q0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fblab::Trajectory::from_callable(nullptr), std::invalid_argument);
}

TEST_CASE("tabulated trajectories follow their samples", "[laplace]") {
    std::vector<double> ts, ss;
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        ts.push_back(t);
        ss.push_back(t * t);
    }
    const auto traj = fblab::Trajectory::tabulated(ts, ss);
    for (double t : {0.05, 0.333, 0.95})
        CHECK(traj(t) == Approx(t * t).margin(1e-4));

    // probing through the tabulated front matches the callable one closely
    const auto src = fblab::SourceTerm::constant(1.0);
    const auto a = fblab::probe_formula(make_query(2.0, 1.0, 1.0, traj, src));
    const auto b = fblab::probe_formula(make_query(
        2.0, 1.0, 1.0, fblab::Trajectory::from_callable([](double t) { return t * t; }), src));
    CHECK(rel_err(a.scaled_u_hat, b.scaled_u_hat) < 1e-6);
}

TEST_CASE("certificate names", "[laplace]") {
    CHECK(std::string(fblab::to_string(fblab::SignCertificate::Negative)) == "Negative");
    CHECK(std::string(fblab::to_string(fblab::SignCertificate::NonNegative)) == "NonNegative");
    CHECK(std::string(fblab::to_string(fblab::SignCertificate::Indeterminate)) ==
          "Indeterminate");
}

TEST_CASE("probe is deterministic", "[laplace]") {
    const auto q = make_query(2.0, 1.0, 1.0, fblab::preset_trajectories()[3].second,
                              fblab::SourceTerm::constant(1.0));
    const auto a = fblab::probe_formula(q);
    const auto b = fblab::probe_formula(q);
    CHECK(a.scaled_u_hat == b.scaled_u_hat);
    CHECK(a.u_hat == b.u_hat);
}
