#include <cmath>

#include <doctest.h>

#include "morsem/kernels.hpp"

using namespace morsem;

namespace {
const ModelManifold E3 = ModelManifold::euclidean(3);
const ModelManifold H3 = ModelManifold::hyperbolic(3, 1.0);
const ModelManifold H5 = ModelManifold::hyperbolic(5, 1.0);
const HeatKernelModel e3 = HeatKernelModel::for_manifold(E3);
const HeatKernelModel h3 = HeatKernelModel::for_manifold(H3);
const HeatKernelModel h5 = HeatKernelModel::for_manifold(H5);
}  // namespace

TEST_CASE("heat kernel values") {
    CHECK(heat_kernel(e3, 1.0, 0.0) == doctest::Approx(std::pow(4.0 * pi, -1.5)).epsilon(1e-14));
    double exact = std::pow(4.0 * pi, -1.5) * (1.0 / std::sinh(1.0)) * std::exp(-1.25);
    CHECK(heat_kernel(h3, 1.0, 1.0) == doctest::Approx(exact).epsilon(1e-13));
    CHECK(exact == doctest::Approx(5.473e-3).epsilon(1e-3));
    // removable limit r -> 0
    CHECK(heat_kernel(h3, 1.0, 0.0) ==
          doctest::Approx(std::pow(4.0 * pi, -1.5) * std::exp(-1.0)).epsilon(1e-13));
    CHECK(heat_kernel(h3, 1.0, 1e-9) ==
          doctest::Approx(heat_kernel(h3, 1.0, 0.0)).epsilon(1e-12));
    CHECK_THROWS_AS(heat_kernel(h3, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(HeatKernelModel::for_manifold(ModelManifold::hyperbolic(4, 1.0)),
                    std::domain_error);
}

TEST_CASE("radial derivative matches finite differences") {
    for (const HeatKernelModel& model : {e3, h3, h5})
        for (double t : {0.3, 1.0, 4.0})
            for (double r : {0.2, 1.0, 3.0}) {
                double h = 1e-5;
                double fd = (heat_kernel(model, t, r + h) - heat_kernel(model, t, r - h)) /
                            (2.0 * h);
                double an = heat_kernel_dr(model, t, r);
                CHECK(an == doctest::Approx(fd).epsilon(1e-8));
            }
    CHECK(heat_kernel_dr(h3, 1.0, 0.0) == 0.0);
    CHECK(heat_kernel_dr(e3, 1.0, 1.0) ==
          doctest::Approx(-0.5 * std::pow(4.0 * pi, -1.5) * std::exp(-0.25)).epsilon(1e-12));
}

TEST_CASE("second derivative matches finite differences") {
    for (const HeatKernelModel& model : {e3, h3, h5})
        for (double t : {0.5, 2.0})
            for (double r : {0.3, 1.5}) {
                double h = 1e-4;
                double fd = (heat_kernel(model, t, r + h) - 2.0 * heat_kernel(model, t, r) +
                             heat_kernel(model, t, r - h)) /
                            (h * h);
                CHECK(heat_kernel_drr(model, t, r) == doctest::Approx(fd).epsilon(1e-5));
            }
}

TEST_CASE("kernel mass is 1 (stochastic completeness)") {
    QuadSpec spec;
    spec.rel_tol = 1e-10;
    for (double t : {0.1, 1.0, 10.0}) {
        CHECK(kernel_mass(e3, t, spec) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(kernel_mass(h3, t, spec) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(kernel_mass(h5, t, spec) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("PDE residual certifies the closed forms") {
    CHECK(kernel_pde_residual(e3, 1.0, 1.0) <= 1e-8);
    CHECK(kernel_pde_residual(h3, 0.5, 2.0) <= 1e-6);
    CHECK(kernel_pde_residual(h5, 1.0, 1.0) <= 1e-6);
    for (double t : {0.05, 0.5, 5.0})
        for (double r : {0.1, 1.0, 4.0}) {
            CHECK(kernel_pde_residual(h3, t, r) <= 1e-6);
            CHECK(kernel_pde_residual(h5, t, r) <= 1e-6);
        }
}

TEST_CASE("curvature scaling identity") {
    for (double kap : {0.25, 1.0, 4.0}) {
        HeatKernelModel mk = HeatKernelModel::for_manifold(ModelManifold::hyperbolic(3, kap));
        for (double t : {0.4, 2.5})
            for (double r : {0.3, 1.2, 4.0}) {
                double lhs = heat_kernel(mk, t, r);
                double rhs =
                    std::pow(kap, 1.5) * heat_kernel(h3, kap * t, std::sqrt(kap) * r);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
    }
}

TEST_CASE("envelope evaluation") {
    // sharp hyperbolic envelope at r = 0, t = 1: e^{-1}
    KernelEnvelope sharp{KernelEnvelope::Kind::hyperbolic_sharp, H3};
    CHECK(envelope_eval(sharp, 1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    // ricci_flat with C2 = 1/4 equals the Gaussian up to (4 pi)^{-3/2}
    KernelEnvelope flat{KernelEnvelope::Kind::ricci_flat, E3};
    flat.C1 = 1.0;
    flat.C2 = 0.25;
    for (double t : {0.5, 2.0})
        for (double r : {0.0, 1.0, 3.0})
            CHECK(heat_kernel(e3, t, r) / envelope_eval(flat, t, r) ==
                  doctest::Approx(std::pow(4.0 * pi, -1.5)).epsilon(1e-12));
    // cartan_hadamard at t = 2, r = 0 with lambda1 = 1: e^{-2}
    KernelEnvelope ch{KernelEnvelope::Kind::cartan_hadamard, H3};
    ch.D = 4.0;
    CHECK(envelope_eval(ch, 2.0, 0.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    KernelEnvelope bad = ch;
    bad.D = 1.5;
    CHECK_THROWS_AS(envelope_eval(bad, 1.0, 0.0), std::domain_error);
    KernelEnvelope wrong{KernelEnvelope::Kind::hyperbolic_sharp, E3};
    CHECK_THROWS_AS(envelope_eval(wrong, 1.0, 0.0), std::domain_error);
}

TEST_CASE("sharp-envelope comparability over the full scan window") {
    KernelEnvelope sharp{KernelEnvelope::Kind::hyperbolic_sharp, H3};
    RatioScan scan = envelope_ratio_scan(h3, sharp, log_grid(0.01, 100.0, 9),
                                         linear_grid(0.0, 40.0, 11));
    CHECK(scan.min_ratio > 0.0);
    CHECK(scan.max_ratio / scan.min_ratio <= 10.0);
    // analytic ratio: (4 pi)^{-3/2} 2 r / ((1 + r)(1 - e^{-2r})), range ~ 2
    CHECK(scan.max_ratio / scan.min_ratio >= 1.5);
}

TEST_CASE("combined envelope dominates after calibration") {
    KernelEnvelope env{KernelEnvelope::Kind::combined, H3};
    double C = 0.0;
    for (double t : log_grid(0.02, 50.0, 8))
        for (double r : linear_grid(0.0, 30.0, 9))
            C = std::max(C, heat_kernel(h3, t, r) / envelope_eval(env, t, r));
    env.C = C;
    for (double t : log_grid(0.02, 50.0, 21))
        for (double r : linear_grid(0.0, 30.0, 25))
            CHECK(heat_kernel(h3, t, r) <= envelope_eval(env, t, r) * (1.0 + 1e-9));
}

TEST_CASE("davies and gradient envelopes evaluate") {
    KernelEnvelope dav{KernelEnvelope::Kind::davies, H3};
    CHECK(envelope_eval(dav, 1.0, 1.0) > 0.0);
    KernelEnvelope grad{KernelEnvelope::Kind::bounded_geometry_grad, H3};
    grad.C1 = 2.0;
    grad.C2 = 0.2;
    CHECK(envelope_eval(grad, 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(envelope_eval(grad, 4.0, 0.0) == doctest::Approx(2.0 * std::pow(4.0, -2.0)).epsilon(1e-13));
}
