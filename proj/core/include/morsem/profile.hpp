#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace morsem {

/// Declared behavior of a radial profile at infinity. The declaration is
/// used to pick truncation radii and tail extrapolation models; it must match
/// the evaluator within a modest factor, which the tests spot-check.
struct Decay {
    enum class Type { none, exponential, exp_square, power, compact };
    Type type = Type::none;
    double rate = 0.0;     // k in e^{-k r} or e^{-k r^2}
    double eta = 0.0;      // power-law exponent r^{-eta}
    double support = 0.0;  // support radius for compact profiles

    static Decay none() { return {}; }
    static Decay exponential(double k) { return {Type::exponential, k, 0.0, 0.0}; }
    static Decay exp_square(double k) { return {Type::exp_square, k, 0.0, 0.0}; }
    static Decay power(double eta) { return {Type::power, 0.0, eta, 0.0}; }
    static Decay compact(double radius) { return {Type::compact, 0.0, 0.0, radius}; }
};

/// A radial function r -> f(r) with a declared integrable singularity
/// exponent at 0 (|f| ~ r^{-l}) and a declared decay type at infinity.
struct RadialProfile {
    std::function<double(double)> eval;
    double singularity_exponent = 0.0;
    Decay decay;

    double operator()(double r) const { return eval(r); }
};

/// Radial samples on an increasing grid, interpolated by cubic Hermite
/// pieces with a singular power extension below the first node and a
/// fitted tail model beyond the last one. This is how evolved snapshots
/// re-enter the Morrey machinery as profiles.
class SampledRadialProfile {
public:
    SampledRadialProfile(std::vector<double> grid, std::vector<double> values,
                         double singularity_exponent, Decay tail_hint);

    double operator()(double r) const;
    /// Derivative of the interpolant (tail-model derivative beyond the grid).
    double derivative(double r) const;
    double grid_max() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    RadialProfile as_profile() const;

private:
    double tail(double r) const;

    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    double sing_exp_ = 0.0;
    Decay hint_;
    // fitted tail: |f| ~ amp * exp(-a r - b r^2) * r^{-e}
    double tail_amp_ = 0.0, tail_a_ = 0.0, tail_b_ = 0.0, tail_e_ = 0.0;
    double tail_sign_ = 1.0;
};

/// r^{-l} e^{-k r} (or e^{-k r^2} for the Gaussian twin).
RadialProfile power_exp_profile(double l, double k, bool gaussian = false);

/// Pure power law r^{-eta}.
RadialProfile power_profile(double eta);

/// Indicator-like plateau of height h supported on [0, radius] with a smooth
/// shoulder of relative width w.
RadialProfile plateau_profile(double h, double radius, double shoulder = 0.125);

}  // namespace morsem
