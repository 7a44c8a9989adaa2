#pragma once

#include <stdexcept>
#include <vector>

#include "morsem/specfun.hpp"

namespace morsem {

/// Constant-curvature model space: hyperbolic H^m (sectional curvature
/// -kappa, kappa > 0) or Euclidean R^m (kappa = 0). All spectral and
/// curvature constants used by the estimate checks derive from (kind, m,
/// kappa).
struct ModelManifold {
    enum class Kind { euclidean, hyperbolic };

    Kind kind = Kind::euclidean;
    int m = 3;
    double kappa = 0.0;

    static ModelManifold euclidean(int m) {
        if (m < 2) throw std::domain_error("ModelManifold: dimension must be >= 2");
        return ModelManifold{Kind::euclidean, m, 0.0};
    }
    static ModelManifold hyperbolic(int m, double kappa) {
        if (m < 2) throw std::domain_error("ModelManifold: dimension must be >= 2");
        if (!(kappa > 0.0)) throw std::domain_error("ModelManifold: hyperbolic requires kappa > 0");
        return ModelManifold{Kind::hyperbolic, m, kappa};
    }

    bool is_hyperbolic() const { return kind == Kind::hyperbolic; }

    /// Ricci lower-bound constant: Ric >= -K(m-1).
    double K() const { return kappa; }
    /// Ricci upper-bound constant: Ric <= -c0 (c0 = kappa(m-1), 0 on R^m).
    double c0() const { return is_hyperbolic() ? kappa * (m - 1) : 0.0; }
    /// Bottom of the L^2 spectrum of -Laplacian: (m-1)^2 kappa / 4.
    double lambda1() const { return is_hyperbolic() ? 0.25 * (m - 1) * (m - 1) * kappa : 0.0; }
    /// Supremum of the sectional curvature (-kappa on H^m, 0 on R^m).
    double kappa_star() const { return is_hyperbolic() ? -kappa : 0.0; }
    double sqrt_kappa() const { return std::sqrt(kappa); }
};

/// Geodesic ball described by the offset of its center from a reference
/// point and its radius.
struct BallSpec {
    double center_offset = 0.0;
    double radius = 1.0;

    BallSpec() = default;
    BallSpec(double d, double R) : center_offset(d), radius(R) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw std::domain_error("BallSpec: offset must be finite and >= 0");
        if (!(R > 0.0) || !std::isfinite(R)) throw std::domain_error("BallSpec: radius must be finite and > 0");
    }
};

/// J(r) = (sinh(sqrt(kappa) r)/sqrt(kappa))^{m-1} or r^{m-1}: the density of
/// the geodesic sphere of radius r relative to omega_{m-1}.
double volume_jacobian(const ModelManifold& M, double r);
double log_volume_jacobian(const ModelManifold& M, double r);

/// Exact geodesic ball volume. Evaluated in log space once
/// sqrt(kappa) R > 30; throws std::overflow_error if it exceeds double range.
double ball_volume(const ModelManifold& M, double R);
double log_ball_volume(const ModelManifold& M, double R);

/// Geodesic surface area of the sphere of radius r.
inline double sphere_surface(const ModelManifold& M, double r) {
    return sphere_area(M.m) * volume_jacobian(M, r);
}

/// Upper envelope of Bishop type for |B(R)|: C R^n for R <= s,
/// C e^{(m-1) sqrt(K) R} for R > s, and the combined C R^n e^{(m-1) sqrt(K) R}.
/// Constants are calibrated as suprema of volume/shape over a reference grid,
/// so the envelope dominates the volume at every calibration point.
struct VolumeEnvelope {
    int m = 3;
    double K = 1.0;
    double n = 3.0;
    double s = 1.0;
    double C_small = 0.0;
    double C_large = 0.0;
    double C_combined = 0.0;

    double piecewise(double R) const;
    double combined(double R) const;
};

std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

VolumeEnvelope calibrate_volume_envelope(const ModelManifold& M, double n, double s,
                                         const std::vector<double>& R_grid);

/// Convenience form of the calibrated combined envelope at a single radius.
double volume_upper_envelope(int m, double K, double n, double s, double R);

struct VolumeRatioCheck {
    double ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// |B(R2)|/|B(R1)| against C(m) (R2/R1)^m e^{k(R2-R1)}, k = sqrt(K)(m-1),
/// with C calibrated over a coarse grid of radius pairs.
VolumeRatioCheck volume_ratio_check(const ModelManifold& M, double R1, double R2);

struct VolumeLowerCheck {
    bool poly_pass = false;
    bool exp_applicable = false;
    bool exp_pass = false;
    double alpha = 0.0;
    double C_exp = 0.0;
};

/// Lower bounds |B(R)| >= alpha R^m (alpha calibrated on a reference grid)
/// and, when c0 > 0, |B(R)| >= C e^{sqrt(c0) R} for R >= R0 with C pinned
/// at R0.
VolumeLowerCheck volume_lower_check(const ModelManifold& M, double R, double R0);

/// Geodesic distance between the point at distance d from a pole and the
/// point at polar coordinates (rho, theta) about that pole.
double geodesic_distance_polar(const ModelManifold& M, double d, double rho, double theta);

/// d(dist)/dd at fixed (rho, theta); needed by gradient kernels.
double geodesic_distance_polar_dd(const ModelManifold& M, double d, double rho, double theta);

}  // namespace morsem
