#include "morsem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morsem/errors.hpp"
#include "morsem/numerics.hpp"

namespace morsem {

double cap_weight(int m, double phi) {
    if (m < 2) throw std::domain_error("cap_weight: m >= 2 required");
    if (!(phi >= 0.0 && phi <= pi + 1e-12)) throw std::domain_error("cap_weight: phi outside [0,pi]");
    phi = std::min(phi, pi);
    double c = std::cos(phi);
    switch (m) {
        case 2:
            return phi;
        case 3:
            return 1.0 - c;
        case 4:
            return 0.5 * (phi - std::sin(phi) * c);
        case 5:
            return (2.0 - 3.0 * c + c * c * c) / 3.0;
        default: {
            // 32-point Gauss-Legendre on [0, phi]; the integrand is entire.
            static const double x16[8] = {0.0950125098376374, 0.2816035507792589,
                                          0.4580167776572274, 0.6178762444026438,
                                          0.7554044083550030, 0.8656312023878318,
                                          0.9445750230732326, 0.9894009349916499};
            static const double w16[8] = {0.1894506104550685, 0.1826034150449236,
                                          0.1691565193950025, 0.1495959888165767,
                                          0.1246289712555339, 0.0951585116824928,
                                          0.0622535239386479, 0.0271524594117541};
            double half = 0.5 * phi;
            double sum = 0.0;
            for (int i = 0; i < 8; ++i) {
                double u1 = half * (1.0 - x16[i]);
                double u2 = half * (1.0 + x16[i]);
                sum += w16[i] * (std::pow(std::sin(u1), m - 2) + std::pow(std::sin(u2), m - 2));
            }
            return half * sum;
        }
    }
}

double cap_weight_full(int m) {
    return std::sqrt(pi) * std::tgamma(0.5 * (m - 1)) / std::tgamma(0.5 * m);
}

double volume_jacobian(const ModelManifold& M, double r) {
    if (r < 0.0) throw std::domain_error("volume_jacobian: r >= 0 required");
    if (r == 0.0) return 0.0;
    if (!M.is_hyperbolic()) return std::pow(r, M.m - 1);
    double x = M.sqrt_kappa() * r;
    if (x <= 30.0) {
        return std::pow(r * sinhc(x), M.m - 1);
    }
    return exp_checked((M.m - 1) * (log_sinh(x) - 0.5 * std::log(M.kappa)),
                       "volume_jacobian overflow");
}

double log_volume_jacobian(const ModelManifold& M, double r) {
    if (!(r > 0.0)) throw std::domain_error("log_volume_jacobian: r > 0 required");
    if (!M.is_hyperbolic()) return (M.m - 1) * std::log(r);
    double x = M.sqrt_kappa() * r;
    return (M.m - 1) * (log_sinh(x) - 0.5 * std::log(M.kappa));
}

namespace {

// I_n(X) = int_0^X sinh^n(s) ds.
// Small X: quadrature of the nonnegative integrand (no cancellation).
// Moderate X: binomial expansion of sinh^n, exact.
// Large X: the j = 0 exponential dominates; work with log I_n.
double log_integral_sinh_pow(int n, double X) {
    if (n < 1) throw std::domain_error("integral_sinh_pow: n >= 1");
    if (!(X > 0.0)) throw std::domain_error("integral_sinh_pow: X > 0");
    if (X <= 0.5) {
        QuadSpec spec;
        spec.rel_tol = 1e-14;
        spec.abs_tol = 0.0;
        auto f = [n](double s) { return std::pow(std::sinh(s), n); };
        return std::log(integrate_adaptive_1d(f, 0.0, X, spec).value);
    }
    if (X <= 30.0) {
        double sum = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= n; ++j) {
            int a = n - 2 * j;
            double term = (a == 0) ? X : std::expm1(a * X) / a;
            sum += ((j % 2 == 0) ? 1.0 : -1.0) * binom * term;
            binom = binom * (n - j) / (j + 1);
        }
        return std::log(sum) - n * std::log(2.0);
    }
    // sum_j (-1)^j C(n,j) (e^{-2jX} - e^{-nX})/(n-2j), relative to e^{nX}.
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
        int a = n - 2 * j;
        double term;
        if (a == 0)
            term = X * std::exp(-static_cast<double>(n) * X);
        else
            term = (std::exp(-2.0 * j * X) - std::exp(-static_cast<double>(n) * X)) / a;
        sum += ((j % 2 == 0) ? 1.0 : -1.0) * binom * term;
        binom = binom * (n - j) / (j + 1);
    }
    return n * X - n * std::log(2.0) + std::log(sum);
}

}  // namespace

double log_ball_volume(const ModelManifold& M, double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw std::domain_error("ball_volume: R > 0 required");
    if (!M.is_hyperbolic()) return std::log(sphere_area(M.m) / M.m) + M.m * std::log(R);
    double X = M.sqrt_kappa() * R;
    return std::log(sphere_area(M.m)) - 0.5 * M.m * std::log(M.kappa) +
           log_integral_sinh_pow(M.m - 1, X);
}

double ball_volume(const ModelManifold& M, double R) {
    double lv = log_ball_volume(M, R);
    return exp_checked(lv, "ball_volume overflow");
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::domain_error("log_grid: bad range");
    std::vector<double> g(count);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (!(hi >= lo) || count < 2) throw std::domain_error("linear_grid: bad range");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
    return g;
}

double VolumeEnvelope::piecewise(double R) const {
    if (!(R > 0.0)) throw std::domain_error("VolumeEnvelope: R > 0 required");
    if (R <= s) return C_small * std::pow(R, n);
    return C_large * exp_checked((m - 1) * std::sqrt(K) * R, "volume envelope overflow");
}

double VolumeEnvelope::combined(double R) const {
    if (!(R > 0.0)) throw std::domain_error("VolumeEnvelope: R > 0 required");
    return C_combined *
           exp_checked(n * std::log(R) + (m - 1) * std::sqrt(K) * R, "volume envelope overflow");
}

VolumeEnvelope calibrate_volume_envelope(const ModelManifold& M, double n, double s,
                                         const std::vector<double>& R_grid) {
    if (!M.is_hyperbolic()) throw std::domain_error("volume envelope: requires K > 0");
    if (!(n >= 0.0 && n <= M.m)) throw std::domain_error("volume envelope: 0 <= n <= m");
    if (!(s > 0.0)) throw std::domain_error("volume envelope: s > 0");
    VolumeEnvelope env;
    env.m = M.m;
    env.K = M.K();
    env.n = n;
    env.s = s;
    const double k = (M.m - 1) * std::sqrt(M.K());
    double log_cs = -std::numeric_limits<double>::infinity();
    double log_cl = -std::numeric_limits<double>::infinity();
    double log_cc = -std::numeric_limits<double>::infinity();
    bool small_seen = false, large_seen = false;
    auto absorb = [&](double R) {
        double lv = log_ball_volume(M, R);
        if (R <= s) {
            log_cs = std::max(log_cs, lv - n * std::log(R));
            small_seen = true;
        } else {
            log_cl = std::max(log_cl, lv - k * R);
            large_seen = true;
        }
        log_cc = std::max(log_cc, lv - n * std::log(R) - k * R);
    };
    for (double R : R_grid)
        if (R > 0.0) absorb(R);
    // vol/R^n grows toward R = s and vol e^{-kR} toward the right endpoint,
    // so both suprema must see the branch ends.
    absorb(s);
    if (!small_seen) small_seen = true;
    if (!large_seen) absorb(std::max(2.0 * s, R_grid.empty() ? 2.0 * s : R_grid.back()));
    env.C_small = std::exp(log_cs);
    env.C_large = std::exp(log_cl);
    env.C_combined = std::exp(log_cc);
    return env;
}

double volume_upper_envelope(int m, double K, double n, double s, double R) {
    if (!(K > 0.0)) throw std::domain_error("volume_upper_envelope: K > 0 required");
    if (!(R > 0.0)) throw std::domain_error("volume_upper_envelope: R > 0 required");
    ModelManifold M = ModelManifold::hyperbolic(m, K);
    VolumeEnvelope env = calibrate_volume_envelope(M, n, s, log_grid(1e-3, 30.0, 48));
    return env.piecewise(R);
}

VolumeRatioCheck volume_ratio_check(const ModelManifold& M, double R1, double R2) {
    if (!(R1 > 0.0 && R2 > R1)) throw std::domain_error("volume_ratio_check: 0 < R1 < R2");
    const double k = (M.m - 1) * std::sqrt(M.K());
    // Calibrate C(m) over coarse radius pairs, in log space.
    std::vector<double> grid = log_grid(1e-3, 30.0, 25);
    double log_C = -std::numeric_limits<double>::infinity();
    std::vector<double> lv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) lv[i] = log_ball_volume(M, grid[i]);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            double shape = M.m * std::log(grid[j] / grid[i]) + k * (grid[j] - grid[i]);
            log_C = std::max(log_C, lv[j] - lv[i] - shape);
        }
    double log_ratio = log_ball_volume(M, R2) - log_ball_volume(M, R1);
    double log_bound = log_C + M.m * std::log(R2 / R1) + k * (R2 - R1);
    VolumeRatioCheck out;
    out.ratio = log_ratio < 700.0 ? std::exp(log_ratio) : std::numeric_limits<double>::infinity();
    out.bound = log_bound < 700.0 ? std::exp(log_bound) : std::numeric_limits<double>::infinity();
    out.pass = log_ratio <= log_bound + 1e-9;
    return out;
}

VolumeLowerCheck volume_lower_check(const ModelManifold& M, double R, double R0) {
    if (!(R > 0.0)) throw std::domain_error("volume_lower_check: R > 0 required");
    VolumeLowerCheck out;
    std::vector<double> grid = log_grid(1e-3, 30.0, 40);
    double log_alpha = std::numeric_limits<double>::infinity();
    for (double r : grid)
        log_alpha = std::min(log_alpha, log_ball_volume(M, r) - M.m * std::log(r));
    out.alpha = std::exp(log_alpha);
    out.poly_pass = log_ball_volume(M, R) >= log_alpha + M.m * std::log(R) - 1e-9;
    if (M.c0() > 0.0) {
        if (!(R0 > 0.0) || !(R >= R0))
            throw std::domain_error("volume_lower_check: exp check requires R >= R0 > 0");
        out.exp_applicable = true;
        double sc = std::sqrt(M.c0());
        double log_Ce = log_ball_volume(M, R0) - sc * R0;
        out.C_exp = std::exp(std::min(log_Ce, 700.0));
        out.exp_pass = log_ball_volume(M, R) >= log_Ce + sc * R - 1e-9;
    }
    return out;
}

double geodesic_distance_polar(const ModelManifold& M, double d, double rho, double theta) {
    if (!(d >= 0.0) || !(rho >= 0.0))
        throw std::domain_error("geodesic_distance_polar: d, rho >= 0 required");
    if (!(theta >= 0.0 && theta <= pi + 1e-12))
        throw std::domain_error("geodesic_distance_polar: theta outside [0, pi]");
    theta = std::min(theta, pi);
    if (d == 0.0) return rho;
    if (rho == 0.0) return d;
    double sh = std::sin(0.5 * theta);
    if (!M.is_hyperbolic()) {
        double diff = d - rho;
        return std::sqrt(diff * diff + 4.0 * d * rho * sh * sh);
    }
    double sk = M.sqrt_kappa();
    double a = sk * d, b = sk * rho;
    if (a + b <= 300.0) {
        double arg = std::cosh(a - b) + 2.0 * std::sinh(a) * std::sinh(b) * sh * sh;
        arg = std::max(arg, 1.0);
        return std::acosh(arg) / sk;
    }
    // log-space evaluation for very distant points
    double L1 = log_cosh(a - b);
    double Ldist;
    if (sh > 0.0) {
        double L2 = std::log(2.0 * sh * sh) + log_sinh(a) + log_sinh(b);
        double hi = std::max(L1, L2), lo = std::min(L1, L2);
        Ldist = hi + std::log1p(std::exp(lo - hi));
    } else {
        Ldist = L1;
    }
    if (Ldist < 30.0) {
        double arg = std::max(std::exp(Ldist), 1.0);
        return std::acosh(arg) / sk;
    }
    return (Ldist + std::log(2.0)) / sk;
}

double geodesic_distance_polar_dd(const ModelManifold& M, double d, double rho, double theta) {
    double dist = geodesic_distance_polar(M, d, rho, theta);
    if (dist < 1e-14) return 0.0;
    if (!M.is_hyperbolic()) return (d - rho * std::cos(theta)) / dist;
    double sk = M.sqrt_kappa();
    double a = sk * d, b = sk * rho;
    double num = std::sinh(a) * std::cosh(b) - std::cosh(a) * std::sinh(b) * std::cos(theta);
    return num / std::sinh(sk * dist);
}

}  // namespace morsem
