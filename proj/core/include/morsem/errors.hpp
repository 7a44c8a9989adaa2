#pragma once

#include <stdexcept>
#include <string>

namespace morsem {

/// Quadrature failed to reach the requested tolerance; carries the best
/// estimate and a bound on its error so callers can degrade gracefully.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best, double error_bound)
        : std::runtime_error(what), best_value(best), error_bound(error_bound) {}
    double best_value;
    double error_bound;
};

/// The requested integral diverges (e.g. |f|^p with l*p >= m near r = 0).
class DivergentIntegralError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A fit was requested with too few usable points.
class InsufficientDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A tail truncation could not be certified; carries the remainder estimate.
class TailBoundError : public std::runtime_error {
public:
    TailBoundError(const std::string& what, double remainder)
        : std::runtime_error(what), remainder_estimate(remainder) {}
    double remainder_estimate;
};

}  // namespace morsem
