#pragma once

#include <functional>
#include <vector>

#include "morsem/geometry.hpp"
#include "morsem/profile.hpp"

namespace morsem {

struct QuadSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_depth = 40;
    /// integrable singularities: the interval is cut there and the adjacent
    /// panels are integrated under a power substitution
    std::vector<double> singular_points{};
    /// plain interval cuts, used to pin sharp but regular features (kernel
    /// peaks) so the initial panels cannot step over them
    std::vector<double> split_points{};

    QuadSpec with_rel_tol(double t) const {
        QuadSpec s = *this;
        s.rel_tol = t;
        return s;
    }
    QuadSpec with_singularities(std::vector<double> pts) const {
        QuadSpec s = *this;
        s.singular_points = std::move(pts);
        return s;
    }
    QuadSpec with_splits(std::vector<double> pts) const {
        QuadSpec s = *this;
        s.split_points = std::move(pts);
        return s;
    }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7,15) over [a, b]. Declared singular points split
/// the interval and are absorbed by a power substitution, so integrable
/// endpoint singularities converge at full rate. Throws QuadratureError when
/// the tolerance cannot be met within max_depth.
QuadResult integrate_adaptive_1d(const std::function<double(double)>& f, double a, double b,
                                 const QuadSpec& spec);

/// Integral over [a, infinity) for integrands with exponential decay at the
/// declared rate, via the substitution x = a - log(1-u)/rate.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double rate,
                                 const QuadSpec& spec);

/// Integral of |f(dist to reference point)|^p over a geodesic ball whose
/// center sits at distance ball.center_offset from the reference point.
/// Reduced to one radial integral: spheres about the singularity meet the
/// ball in caps whose angular measure is cap_weight(m, phi*(r)). When the
/// singularity lies inside the ball, the inner full-sphere range is the small
/// ball around it and is integrated with the singular substitution.
double integrate_polar_ball(const ModelManifold& M, const RadialProfile& f, double p,
                            const BallSpec& ball, const QuadSpec& spec);

/// Angular opening of the cap {dist(., ball center) <= R} on the geodesic
/// sphere of radius r about the reference point; negative means empty.
double cap_angle(const ModelManifold& M, double d, double r, double R);

/// omega_{m-2} int_0^R int_0^pi g(rho, theta) sin^{m-2}(theta) J(rho)
/// dtheta drho: the centered polar-coordinate integral over a geodesic ball.
/// Integrable rho-singularities are declared through spec.singular_points.
QuadResult spherical_integral(const ModelManifold& M,
                              const std::function<double(double, double)>& g, double R,
                              const QuadSpec& spec);

struct SweepSpec {
    std::vector<double> R_grid;
    std::vector<double> d_grid;
    int refine_rounds = 2;

    static SweepSpec log_radii(double R_min, double R_max, int R_count, double d_max,
                               int d_count, int refine_rounds = 2);
};

/// Morrey-style default: R log-spaced on [1e-2, 50] (30 points), offsets on
/// [0, 10] (21 points), two refinement rounds.
SweepSpec default_sweep();

struct SupResult {
    double sup_estimate = 0.0;
    BallSpec argmax{0.0, 1.0};
};

/// Maximum of the objective over the (d, R) grid plus golden-section
/// refinement around the running argmax in each coordinate. Every reported
/// value was attained by an evaluation, so the estimate is a certified lower
/// bound of the true supremum.
SupResult sup_sweep(const std::function<double(const BallSpec&)>& objective,
                    const SweepSpec& sweep);

struct FitResult {
    double slope = 0.0;
    double stderr_slope = 0.0;
    int points_used = 0;
};

/// Least-squares slope of log y against log t restricted to the window.
FitResult fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                           double t_min, double t_max);

/// Least-squares slope of log y against t; returns the decay rate
/// (positive for decaying data).
FitResult fit_exp_rate(const std::vector<std::pair<double, double>>& points, double t_min,
                       double t_max);

}  // namespace morsem
