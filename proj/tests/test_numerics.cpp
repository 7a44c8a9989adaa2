#include <cmath>

#include <doctest.h>

#include "morsem/errors.hpp"
#include "morsem/numerics.hpp"

using namespace morsem;

namespace {
const ModelManifold E3 = ModelManifold::euclidean(3);
const ModelManifold H3 = ModelManifold::hyperbolic(3, 1.0);
}  // namespace

TEST_CASE("adaptive quadrature: smooth integrands") {
    QuadSpec spec;
    auto sq = [](double x) { return x * x; };
    CHECK(integrate_adaptive_1d(sq, 0.0, 1.0, spec).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    auto osc = [](double x) { return std::sin(x); };
    CHECK(integrate_adaptive_1d(osc, 0.0, pi, spec).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature: declared endpoint singularity") {
    QuadSpec spec;
    spec.singular_points = {0.0};
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK(integrate_adaptive_1d(f, 0.0, 1.0, spec).value == doctest::Approx(2.0).epsilon(1e-10));
    // interior singularity
    QuadSpec mid;
    mid.singular_points = {0.5};
    auto g = [](double x) { return 1.0 / std::sqrt(std::fabs(x - 0.5)); };
    CHECK(integrate_adaptive_1d(g, 0.0, 1.0, mid).value ==
          doctest::Approx(2.0 * std::sqrt(0.5) * 2.0).epsilon(1e-8));
}

TEST_CASE("adaptive quadrature: additivity over splits") {
    QuadSpec spec;
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    QuadResult whole = integrate_adaptive_1d(f, 0.0, 2.0, spec);
    QuadResult a = integrate_adaptive_1d(f, 0.0, 0.7, spec);
    QuadResult b = integrate_adaptive_1d(f, 0.7, 2.0, spec);
    CHECK(std::fabs(whole.value - a.value - b.value) <=
          whole.error_estimate + a.error_estimate + b.error_estimate + 1e-14);
}

TEST_CASE("integrate_to_infinity with exponential decay") {
    QuadSpec spec;
    auto f = [](double x) { return std::exp(-x); };
    CHECK(integrate_to_infinity(f, 0.0, 1.0, spec).value == doctest::Approx(1.0).epsilon(1e-10));
    auto g = [](double x) { return x * std::exp(-2.0 * x); };
    CHECK(integrate_to_infinity(g, 0.0, 2.0, spec).value == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("quadrature failure carries the best estimate") {
    QuadSpec spec;
    spec.max_depth = 2;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 0.0;
    auto nasty = [](double x) { return 1.0 / std::sqrt(std::fabs(x - 0.3141)) ; };
    CHECK_THROWS_AS(integrate_adaptive_1d(nasty, 0.0, 1.0, spec), QuadratureError);
    try {
        integrate_adaptive_1d(nasty, 0.0, 1.0, spec);
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.best_value));
        CHECK(e.error_bound > 0.0);
    }
}

TEST_CASE("integrate_polar_ball: centered closed forms") {
    QuadSpec spec;
    // euclidean: int_{B(1)} r^{-2} dV = 4 pi
    double v = integrate_polar_ball(E3, power_profile(1.0), 2.0, BallSpec(0.0, 1.0), spec);
    CHECK(v == doctest::Approx(4.0 * pi).epsilon(1e-8));
    // constant 1 over the ball reproduces the volume, both kinds
    RadialProfile one;
    one.eval = [](double) { return 1.0; };
    one.decay = Decay::none();
    CHECK(integrate_polar_ball(E3, one, 1.0, BallSpec(0.0, 1.0), spec) ==
          doctest::Approx(4.0 * pi / 3.0).epsilon(1e-8));
    CHECK(integrate_polar_ball(H3, one, 1.0, BallSpec(0.0, 1.0), spec) ==
          doctest::Approx(pi * (std::sinh(2.0) - 2.0)).epsilon(1e-8));
}

TEST_CASE("integrate_polar_ball: singular point outside, against brute quadrature") {
    QuadSpec spec;
    RadialProfile f = power_profile(1.0);
    for (const ModelManifold& M : {E3, H3}) {
        for (double d : {1.2, 3.0}) {
            double fast = integrate_polar_ball(M, f, 2.0, BallSpec(d, 1.0), spec);
            QuadSpec bs = spec.with_rel_tol(1e-8);
            auto g = [&](double rho, double theta) {
                double dist = geodesic_distance_polar(M, d, rho, theta);
                return 1.0 / (dist * dist);
            };
            double brute = spherical_integral(M, g, 1.0, bs).value;
            CHECK(fast == doctest::Approx(brute).epsilon(1e-6));
        }
    }
}

TEST_CASE("integrate_polar_ball: bounded profile, singular point inside the ball") {
    QuadSpec spec;
    RadialProfile f = power_exp_profile(0.0, 1.0);  // e^{-r}, bounded
    for (const ModelManifold& M : {E3, H3}) {
        for (double d : {0.0, 0.4, 0.9}) {
            double fast = integrate_polar_ball(M, f, 1.0, BallSpec(d, 1.0), spec);
            QuadSpec bs = spec.with_rel_tol(1e-8);
            auto g = [&](double rho, double theta) {
                return std::exp(-geodesic_distance_polar(M, d, rho, theta));
            };
            double brute = spherical_integral(M, g, 1.0, bs).value;
            CHECK(fast == doctest::Approx(brute).epsilon(1e-6));
        }
    }
}

TEST_CASE("integrate_polar_ball: interior singularity against the cap closed form") {
    // int_{B(x0,R)} |x - y|^{-2} dx on R^3 with |x0 - y| = d < R:
    // slicing by spheres about y, the cap area is 2 pi r^2 (1 - cos(phi*)) and
    // the integral evaluates to 2 pi R + pi ((R^2 - d^2)/d) log((R+d)/(R-d)).
    QuadSpec spec;
    RadialProfile f = power_profile(1.0);
    for (double R : {1.0, 2.5})
        for (double d : {0.2 * R, 0.5 * R, 0.8 * R}) {
            double exact = 2.0 * pi * R +
                           pi * ((R * R - d * d) / d) * std::log((R + d) / (R - d));
            double fast = integrate_polar_ball(E3, f, 2.0, BallSpec(d, R), spec);
            CHECK(fast == doctest::Approx(exact).epsilon(1e-8));
        }
}

TEST_CASE("integrate_polar_ball: far ball bounded by max of integrand") {
    QuadSpec spec;
    double v = integrate_polar_ball(E3, power_profile(1.0), 2.0, BallSpec(10.0, 1.0), spec);
    CHECK(v <= (4.0 * pi / 3.0) / 81.0 * (1 + 1e-9));
    CHECK(v > 0.0);
}

TEST_CASE("integrate_polar_ball: divergence detection") {
    QuadSpec spec;
    CHECK_THROWS_AS(
        integrate_polar_ball(E3, power_profile(2.0), 2.0, BallSpec(0.0, 1.0), spec),
        DivergentIntegralError);
    // singularity outside the ball converges even for large exponents
    CHECK(integrate_polar_ball(E3, power_profile(2.0), 2.0, BallSpec(5.0, 1.0), spec) > 0.0);
}

TEST_CASE("integrate_polar_ball: monotone in R for nonnegative integrands") {
    QuadSpec spec;
    double prev = 0.0;
    for (double R : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        double v = integrate_polar_ball(H3, power_exp_profile(0.5, 1.0), 2.0,
                                        BallSpec(1.0, R), spec);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("sup_sweep finds the maximizer and certifies a lower bound") {
    SweepSpec sweep = SweepSpec::log_radii(0.1, 10.0, 12, 3.0, 7, 2);
    auto obj = [](const BallSpec& b) {
        double dd = b.center_offset;
        double rr = b.radius - 1.0;
        return -(dd * dd + rr * rr);
    };
    SupResult res = sup_sweep(obj, sweep);
    CHECK(res.argmax.center_offset == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(res.argmax.radius == doctest::Approx(1.0).epsilon(0.02));
    // constant objective
    auto seven = [](const BallSpec&) { return 7.0; };
    CHECK(sup_sweep(seven, sweep).sup_estimate == doctest::Approx(7.0));
    // certified lower bound: never below any grid evaluation
    for (double d : sweep.d_grid)
        for (double R : sweep.R_grid) CHECK(res.sup_estimate >= obj(BallSpec(d, R)) - 1e-14);
}

TEST_CASE("fit_loglog_slope exact on power laws") {
    std::vector<std::pair<double, double>> pts;
    for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) pts.emplace_back(t, std::pow(t, -0.5));
    FitResult fit = fit_loglog_slope(pts, 0.0, 1e9);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.stderr_slope <= 1e-12);
    std::vector<std::pair<double, double>> quad;
    for (double t : {0.5, 1.0, 2.0, 4.0}) quad.emplace_back(t, 3.0 * t * t);
    CHECK(fit_loglog_slope(quad, 0.0, 10.0).slope == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_exp_rate") {
    std::vector<std::pair<double, double>> pts;
    for (double t : {1.0, 2.0, 3.0, 5.0, 8.0}) pts.emplace_back(t, std::exp(-2.0 * t));
    CHECK(fit_exp_rate(pts, 0.0, 10.0).slope == doctest::Approx(2.0).epsilon(1e-12));
    // power-law correction shifts the fitted rate by O(1/t)
    std::vector<std::pair<double, double>> mixed;
    for (double t : linear_grid(10.0, 20.0, 6)) mixed.emplace_back(t, 5.0 * std::exp(-t) / t);
    CHECK(std::fabs(fit_exp_rate(mixed, 9.0, 21.0).slope - 1.0) < 0.1);
    std::vector<std::pair<double, double>> single = {{1.0, 0.5}};
    CHECK_THROWS_AS(fit_exp_rate(single, 0.0, 2.0), InsufficientDataError);
}
