#include <cmath>

#include <doctest.h>

#include "morsem/errors.hpp"
#include "morsem/morrey.hpp"

using namespace morsem;

namespace {
const ModelManifold E3 = ModelManifold::euclidean(3);
const ModelManifold H3 = ModelManifold::hyperbolic(3, 1.0);
const QuadSpec quad = [] {
    QuadSpec q;
    q.rel_tol = 1e-8;
    return q;
}();
}  // namespace

TEST_CASE("normalizer variants") {
    CHECK(normalizer(MorreyParams(2, 1, MorreyVariant::plain), E3, BallSpec(0, 2)) ==
          doctest::Approx(8.0).epsilon(1e-14));
    CHECK(normalizer(MorreyParams(2, 1, MorreyVariant::g), E3, BallSpec(0, 1)) ==
          doctest::Approx(4.0 * pi / 3.0).epsilon(1e-13));
    CHECK(normalizer(MorreyParams(2, 1, MorreyVariant::exponential), H3, BallSpec(0, 1)) ==
          doctest::Approx(std::exp(2.0)).epsilon(1e-13));
    // the K_model variant with the manifold's own K collapses onto g
    for (double R : {0.3, 2.0, 11.0})
        CHECK(normalizer(MorreyParams(2, 1, MorreyVariant::K_model), H3, BallSpec(0, R)) ==
              doctest::Approx(normalizer(MorreyParams(2, 1, MorreyVariant::g), H3,
                                         BallSpec(0, R)))
                  .epsilon(1e-13));
    CHECK_THROWS_AS(MorreyParams(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(normalizer(MorreyParams(2, 3.5), E3, BallSpec(0, 1)), std::domain_error);
}

TEST_CASE("morrey norm of r^{-1} in the plain variant is sqrt(4 pi)") {
    SweepSpec sweep = SweepSpec::log_radii(0.05, 30.0, 14, 6.0, 7, 2);
    MorreyEstimate est = morrey_norm_radial(power_profile(1.0),
                                            MorreyParams(2, 1, MorreyVariant::plain), E3, sweep,
                                            quad);
    CHECK(est.value == doctest::Approx(std::sqrt(4.0 * pi)).epsilon(1e-6));
    // the centered balls maximize: every ball quantity is <= the centered one
    for (double dd : {1.0, 3.0, 6.0})
        CHECK(morrey_ball_quantity(power_profile(1.0), MorreyParams(2, 1, MorreyVariant::plain),
                                   E3, BallSpec(dd, 1.0), quad) <=
              std::sqrt(4.0 * pi) * (1 + 1e-9));
}

TEST_CASE("morrey norm: zero profile") {
    RadialProfile zero;
    zero.eval = [](double) { return 0.0; };
    zero.decay = Decay::compact(1.0);
    SweepSpec sweep = SweepSpec::log_radii(0.1, 5.0, 6, 2.0, 3, 0);
    CHECK(morrey_norm_radial(zero, MorreyParams(2, 1), E3, sweep, quad).value == 0.0);
}

TEST_CASE("member profile on H3 has a finite estimate above the centered certificate") {
    ExampleProfile ex = example_profile(H3, 2.0, 1.0, 0.5, 1.0);
    CHECK(ex.member);
    SweepSpec sweep = SweepSpec::log_radii(0.05, 40.0, 16, 8.0, 9, 1);
    MorreyEstimate est = morrey_norm_radial(ex.profile, MorreyParams(2, 1), H3, sweep, quad);
    CHECK(std::isfinite(est.value));
    double mass = radial_mass(ex.profile, 2.0, H3, 3.0, quad);
    double cert = std::exp(0.5 * (std::log(mass) - log_ball_volume(H3, 3.0) / 3.0));
    CHECK(est.value >= cert * (1 - 1e-9));
}

TEST_CASE("example_profile membership flags") {
    CHECK(example_profile(H3, 2, 1, 1.0, 1.0).member);       // critical exponent
    CHECK(!example_profile(H3, 2, 1, 1.2, 1.0).member);      // l above (m-lambda)/p
    CHECK(!example_profile(H3, 2, 1, 0.5, 0.5).member);      // k below (m-1)sqrt(K)/p
    CHECK(!example_profile(H3, 2, 1, 2.0, 1.0).member);      // l p >= m
    CHECK(example_profile(H3, 2, 1, 0.0, 1.0).member);       // pure exponential
    CHECK(example_profile(E3, 2, 1, 1.0, 0.0).member);       // flat model: k >= 0 suffices
    // Gaussian-decay twin keeps the declaration
    ExampleProfile tw = example_profile(H3, 2, 1, 0.5, 1.0, true);
    CHECK(tw.profile.decay.type == Decay::Type::exp_square);
}

TEST_CASE("radial mass closed forms and monotonicity") {
    CHECK(radial_mass(power_profile(1.0), 2.0, E3, 1.0, quad) ==
          doctest::Approx(4.0 * pi).epsilon(1e-10));
    CHECK(radial_mass(power_profile(1.0), 2.0, E3, 0.0, quad) == 0.0);
    double prev = 0.0;
    for (double r : linear_grid(0.1, 6.0, 25)) {
        double m = radial_mass(power_exp_profile(0.5, 1.0), 2.0, H3, r, quad);
        CHECK(m >= prev);
        prev = m;
    }
    CHECK_THROWS_AS(radial_mass(power_profile(2.0), 2.0, E3, 1.0, quad),
                    DivergentIntegralError);
}

TEST_CASE("L^p divergence increments approach pi log 2 on H3") {
    RadialProfile f = power_exp_profile(0.5, 1.0);
    for (double R : {5.0, 10.0, 20.0}) {
        double inc = lp_ball_integral(f, 2.0, H3, 2.0 * R, quad) -
                     lp_ball_integral(f, 2.0, H3, R, quad);
        CHECK(inc == doctest::Approx(pi * std::log(2.0)).epsilon(0.09));
    }
    // k p = 4 > (m-1) sqrt(K) = 2: convergent, limit pi/6
    CHECK(lp_ball_integral(power_exp_profile(0.0, 2.0), 2.0, H3, 40.0, quad) ==
          doctest::Approx(pi / 6.0).epsilon(1e-8));
    CHECK(lp_ball_integral(power_exp_profile(0.5, 1.0), 2.0, H3, 0.0, quad) == 0.0);
}

TEST_CASE("Holder inequality per ball and at the sup") {
    SweepSpec sweep = SweepSpec::log_radii(0.05, 15.0, 10, 5.0, 6, 0);
    RadialProfile f = power_profile(0.5);
    HolderCheck same = holder_check(f, f, 4.0, 4.0, 1.0, 1.0, E3, sweep, quad);
    CHECK(same.pass);
    CHECK(same.per_ball_pass);
    CHECK(same.lhs == doctest::Approx(same.rhs).epsilon(1e-7));

    ExampleProfile mem = example_profile(H3, 2.0, 1.0, 0.5, 1.0);
    RadialProfile one = plateau_profile(1.0, 100.0);
    HolderCheck mixed = holder_check(mem.profile, one, 2.0, 2.0, 1.0, 2.9, H3, sweep, quad);
    CHECK(mixed.pass);
    CHECK(mixed.per_ball_pass);

    CHECK_THROWS_AS(holder_check(f, f, 1.0, 1.0, 1.0, 1.0, E3, sweep, quad),
                    std::domain_error);
}

TEST_CASE("inclusion under matching scaling") {
    SweepSpec sweep = SweepSpec::log_radii(0.05, 15.0, 10, 5.0, 6, 0);
    RadialProfile f = power_profile(0.5);
    // (m - lambda)/p = (3-2)/2 = 1/2 = (3-1)/4
    InclusionCheck inc = inclusion_check(f, 4.0, 1.0, 2.0, 2.0, E3, sweep, quad);
    CHECK(inc.pass);
    CHECK(inc.per_ball_pass);
    InclusionCheck same = inclusion_check(f, 2.0, 2.0, 2.0, 2.0, E3, sweep, quad);
    CHECK(same.lhs == doctest::Approx(same.rhs).epsilon(1e-10));
    CHECK_THROWS_AS(inclusion_check(f, 2.0, 2.0, 4.0, 1.0, E3, sweep, quad), std::domain_error);
    CHECK_THROWS_AS(inclusion_check(f, 4.0, 1.5, 2.0, 2.0, E3, sweep, quad), std::domain_error);
}

TEST_CASE("homogeneity of the estimate") {
    SweepSpec sweep = SweepSpec::log_radii(0.05, 10.0, 8, 4.0, 5, 1);
    RadialProfile f = power_exp_profile(0.5, 1.0);
    RadialProfile cf = f;
    auto base = f.eval;
    cf.eval = [base](double s) { return 7.5 * base(s); };
    double a = morrey_norm_radial(f, MorreyParams(2, 1), H3, sweep, quad).value;
    double b = morrey_norm_radial(cf, MorreyParams(2, 1), H3, sweep, quad).value;
    CHECK(b == doctest::Approx(7.5 * a).epsilon(1e-12));
}

TEST_CASE("monotone under pointwise domination") {
    SweepSpec sweep = SweepSpec::log_radii(0.05, 10.0, 8, 4.0, 5, 0);
    RadialProfile small = power_exp_profile(0.3, 1.0);
    RadialProfile big = small;
    auto base = small.eval;
    big.eval = [base](double s) { return base(s) + 0.3 * std::exp(-s * s); };
    MorreyParams params(2, 1);
    for (double d : sweep.d_grid)
        for (double R : sweep.R_grid)
            CHECK(morrey_ball_quantity(small, params, H3, BallSpec(d, R), quad) <=
                  morrey_ball_quantity(big, params, H3, BallSpec(d, R), quad) * (1 + 1e-9));
}

TEST_CASE("euclidean dilation covariance in the plain variant") {
    double a = 2.0;
    RadialProfile f = power_exp_profile(0.5, 1.0, true);
    RadialProfile fa = f;
    auto base = f.eval;
    fa.eval = [base, a](double s) { return base(a * s); };
    fa.decay = Decay::exp_square(f.decay.rate * a * a);
    MorreyParams params(2.0, 1.0, MorreyVariant::plain);
    SweepSpec s1 = SweepSpec::log_radii(0.02, 16.0, 14, 4.0, 5, 2);
    SweepSpec s2 = SweepSpec::log_radii(0.02 / a, 16.0 / a, 14, 4.0 / a, 5, 2);
    double n1 = morrey_norm_radial(f, params, E3, s1, quad).value;
    double n2 = morrey_norm_radial(fa, params, E3, s2, quad).value;
    CHECK(n2 == doctest::Approx(std::pow(a, -1.0) * n1).epsilon(1e-4));
}

TEST_CASE("bump train bounds") {
    BumpTrainProfile train({0.0, 2.5, 5.0, 7.5, 10.0});
    BumpTrainBound bound = bump_train_bound(train, MorreyParams(2, 1), H3, quad);
    CHECK(std::isfinite(bound.morrey_upper_bound));
    CHECK(bound.morrey_upper_bound > 0.0);
    CHECK(bound.sup_norm == 1.0);
    REQUIRE(bound.lp_partial_sums.size() == 5);
    // disjoint supports: each bump adds a mass bounded away from 0
    for (std::size_t n = 1; n < 5; ++n) {
        double added = bound.lp_partial_sums[n] - bound.lp_partial_sums[n - 1];
        CHECK(added > 0.1);
    }
    // roughly linear growth in the bump count
    CHECK(bound.lp_partial_sums[4] > 3.0 * bound.lp_partial_sums[0]);
    CHECK_THROWS_AS(BumpTrainProfile({0.0, 1.5}), std::domain_error);
    BumpTrainBound single =
        bump_train_bound(BumpTrainProfile({1.0}), MorreyParams(2, 1), H3, quad);
    CHECK(single.lp_partial_sums.size() == 1);
}
