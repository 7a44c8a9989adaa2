#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace morsem {

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// log(sinh x) without overflow, x > 0.
inline double log_sinh(double x) {
    if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

/// log(cosh x) without overflow.
inline double log_cosh(double x) {
    x = std::fabs(x);
    if (x > 20.0) return x - std::log(2.0) + std::log1p(std::exp(-2.0 * x));
    return std::log(std::cosh(x));
}

/// sinh(x)/x with the removable limit at 0.
inline double sinhc(double x) {
    double ax = std::fabs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

/// x/sinh(x) with the removable limit at 0.
inline double x_over_sinh(double x) { return 1.0 / sinhc(x); }

/// coth(x) - 1/x, analytic through 0 (odd, ~ x/3).
inline double coth_minus_inv(double x) {
    if (std::fabs(x) < 1e-3) {
        double x2 = x * x;
        return x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0;
    }
    return 1.0 / std::tanh(x) - 1.0 / x;
}

/// 1/sinh^2(x) - 1/x^2, analytic through 0 (~ -1/3).
inline double csch2_minus_inv2(double x) {
    if (std::fabs(x) < 1e-3) {
        double x2 = x * x;
        return -1.0 / 3.0 + x2 / 15.0 - 2.0 * x2 * x2 / 189.0;
    }
    double s = std::sinh(x);
    return 1.0 / (s * s) - 1.0 / (x * x);
}

/// Surface measure of the unit (m-1)-sphere, omega_{m-1} = 2 pi^{m/2} / Gamma(m/2).
inline double sphere_area(int m) {
    if (m < 2) throw std::domain_error("sphere_area: dimension must be >= 2");
    return 2.0 * std::pow(pi, 0.5 * m) / std::tgamma(0.5 * m);
}

/// Incomplete sine-power integral W_m(phi) = int_0^phi sin^{m-2}(u) du,
/// the angular cap weight in geodesic polar coordinates.
double cap_weight(int m, double phi);

/// W_m(pi); satisfies omega_{m-1} = omega_{m-2} * cap_weight_full(m).
double cap_weight_full(int m);

/// exp(x) that throws std::overflow_error instead of returning inf.
inline double exp_checked(double x, const char* what = "exp overflow") {
    if (x > 709.0) throw std::overflow_error(what);
    return std::exp(x);
}

}  // namespace morsem
