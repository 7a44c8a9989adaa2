#pragma once

#include <optional>
#include <vector>

#include "morsem/geometry.hpp"
#include "morsem/numerics.hpp"

namespace morsem {

/// Exact radial heat kernel on a model space. The Euclidean kernel is the
/// Gaussian; the hyperbolic one is the odd-dimension closed form (m = 3 and
/// the m = 5 step of the descent recursion
/// p_{n+2} = -e^{-n t} / (2 pi sinh r) d_r p_n, applied analytically).
/// General curvature enters by scaling p_kappa(t,r) = kappa^{m/2} p_1(kappa t,
/// sqrt(kappa) r). The forms are certified in-repo by mass and PDE-residual
/// checks before any estimate consumes them.
struct HeatKernelModel {
    enum class Form { gaussian, hyperbolic_odd_closed_form };

    ModelManifold manifold;
    Form form;

    static HeatKernelModel for_manifold(const ModelManifold& M);
};

double heat_kernel(const HeatKernelModel& model, double t, double r);
double heat_kernel_dr(const HeatKernelModel& model, double t, double r);
/// Second radial derivative; analytic, used by the PDE residual.
double heat_kernel_drr(const HeatKernelModel& model, double t, double r);

struct KernelEnvelope {
    enum class Kind {
        davies,
        cartan_hadamard,
        combined,
        hyperbolic_sharp,
        ricci_flat,
        bounded_geometry_grad
    };

    Kind kind;
    ModelManifold manifold;
    double C = 1.0;    // calibratable multiplicative constant
    double D = 4.0;    // Gaussian widening, cartan_hadamard only (> 2)
    double C1 = 1.0;   // ricci_flat / bounded_geometry_grad prefactor
    double C2 = 0.25;  // ricci_flat / bounded_geometry_grad exponent constant
};

/// The cited envelope formula with carried constants.
double envelope_eval(const KernelEnvelope& env, double t, double r);

/// Total mass of the kernel at time t (expected 1 by stochastic
/// completeness); radial quadrature with certified exponential-tail cutoff.
double kernel_mass(const HeatKernelModel& model, double t, const QuadSpec& spec);

/// |d_t G - Lap_rad G| / (|d_t G| + |Lap_rad G| + tiny) with analytic
/// spatial derivatives and high-order finite differences in t.
double kernel_pde_residual(const HeatKernelModel& model, double t, double r);

struct RatioScan {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<std::tuple<double, double, double>> table;  // (t, r, ratio)
};

/// min/max of heat_kernel / envelope_eval over the grid product.
RatioScan envelope_ratio_scan(const HeatKernelModel& model, const KernelEnvelope& env,
                              const std::vector<double>& t_grid,
                              const std::vector<double>& r_grid);

}  // namespace morsem
