#pragma once

#include <optional>
#include <vector>

#include "morsem/numerics.hpp"
#include "morsem/profile.hpp"

namespace morsem {

/// Which ball-volume proxy A(x0, R) normalizes the localized L^p mass.
enum class MorreyVariant { g, K_model, plain, exponential };

struct MorreyParams {
    double p = 2.0;
    double lambda = 1.0;
    MorreyVariant variant = MorreyVariant::g;

    MorreyParams() = default;
    MorreyParams(double p_, double lambda_, MorreyVariant v = MorreyVariant::g)
        : p(p_), lambda(lambda_), variant(v) {
        if (!(p >= 1.0)) throw std::domain_error("MorreyParams: p >= 1 required");
        if (!(lambda >= 0.0)) throw std::domain_error("MorreyParams: lambda >= 0 required");
    }

    void check_against(int m) const {
        if (!(lambda < m)) throw std::domain_error("MorreyParams: lambda < m required");
    }
};

/// The normalizer A(x0, R): geodesic volume, model-space volume at curvature
/// -K, R^m, or e^{sqrt(K)(m-1)R}.
double normalizer(const MorreyParams& params, const ModelManifold& M, const BallSpec& ball);
double log_normalizer(const MorreyParams& params, const ModelManifold& M, const BallSpec& ball);

/// The localized quantity (A^{-lambda/m} int_ball |f|^p)^{1/p} for one ball.
double morrey_ball_quantity(const RadialProfile& f, const MorreyParams& params,
                            const ModelManifold& M, const BallSpec& ball, const QuadSpec& quad);

struct MorreyEstimate {
    double value = 0.0;
    BallSpec argmax{0.0, 1.0};
};

/// Certified lower bound of the Morrey norm of a radial profile: sup of the
/// ball quantity over the swept (offset, radius) grid plus refinement.
MorreyEstimate morrey_norm_radial(const RadialProfile& f, const MorreyParams& params,
                                  const ModelManifold& M, const SweepSpec& sweep,
                                  const QuadSpec& quad);

struct ExampleProfile {
    RadialProfile profile;
    bool member = false;  // inside the Morrey membership regime
};

/// r^{-l} e^{-k r} (or the Gaussian-decay twin); member when
/// 0 <= l <= (m - lambda)/p and k >= (m-1) sqrt(K) / p.
ExampleProfile example_profile(const ModelManifold& M, double p, double lambda, double l,
                               double k, bool gaussian = false);

/// rho(r) = int_{B(r)} |f|^p dV for the centered ball (pushforward measure).
double radial_mass(const RadialProfile& f, double p, const ModelManifold& M, double r,
                   const QuadSpec& quad);

/// Same integral; certifies L^p blow-up through unbounded increments.
double lp_ball_integral(const RadialProfile& f, double p, const ModelManifold& M, double R,
                        const QuadSpec& quad);

struct HolderCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    bool per_ball_pass = false;
};

/// ||f h||_{r,tau} <= ||f||_{p,lambda} ||h||_{q,mu} with 1/r = 1/p + 1/q and
/// tau/r = lambda/p + mu/q; all three estimates on the identical ball grid.
HolderCheck holder_check(const RadialProfile& f, const RadialProfile& h, double p, double q,
                         double lambda, double mu, const ModelManifold& M,
                         const SweepSpec& sweep, const QuadSpec& quad);

struct InclusionCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    bool per_ball_pass = false;
};

/// ||f||_{g,p,lambda} <= ||f||_{g,q,mu} under (m-lambda)/p = (m-mu)/q, p <= q.
InclusionCheck inclusion_check(const RadialProfile& f, double q, double mu, double p,
                               double lambda, const ModelManifold& M, const SweepSpec& sweep,
                               const QuadSpec& quad);

/// Non-decaying train of unit-ball bumps sin(2 pi n dist) along a geodesic
/// ray; centers must be separated by more than 2.
struct BumpTrainProfile {
    std::vector<double> centers;

    explicit BumpTrainProfile(std::vector<double> centers_);
};

struct BumpTrainBound {
    double morrey_upper_bound = 0.0;
    std::vector<double> lp_partial_sums;  // int over B(r_n + 1), growing
    double sup_norm = 1.0;
};

BumpTrainBound bump_train_bound(const BumpTrainProfile& train, const MorreyParams& params,
                                const ModelManifold& M, const QuadSpec& quad);

}  // namespace morsem
