#pragma once

#include <vector>

#include "morsem/morrey.hpp"
#include "morsem/semigroup.hpp"

namespace morsem {

/// Quadrature plan for the subordination integral
/// Gamma(1/2)^{-1} int_0^inf t^{-1/2} (grad e^{t Lap} f) dt:
/// t = s^2 on (0, t_split] removes the endpoint singularity analytically;
/// the tail beyond T_max is certified from the measured decay of the
/// gradient flow (spectral-gap rate on hyperbolic models, fitted power
/// decay on Euclidean ones).
struct SubordinationSpec {
    double t_split = 1.0;
    double T_max = 40.0;
    double tail_tol = 1e-6;
    QuadSpec quad{};

    void validate() const {
        if (!(t_split > 0.0) || !(T_max > t_split))
            throw std::domain_error("SubordinationSpec: need T_max > t_split > 0");
    }
};

struct RieszValues {
    std::vector<double> values;          // (Rf)(d) per offset, signed
    double tail_remainder = 0.0;         // certified bound on the dropped tail
    double tail_rate = 0.0;              // measured decay rate used for the bound
};

RieszValues riesz_apply_radial(const ModelManifold& M, const RadialProfile& f,
                               const std::vector<double>& offsets,
                               const SubordinationSpec& spec);

struct RieszBoundReport {
    std::vector<double> input_norms;
    std::vector<double> output_norms;
    std::vector<double> ratios;
    double max_ratio = 0.0;
};

/// Morrey norm of the Riesz output over the Morrey norm of the input, per
/// profile; the boundedness claim is that the max ratio stays modest.
RieszBoundReport riesz_bound_report(const ModelManifold& M,
                                    const std::vector<RadialProfile>& profiles,
                                    const MorreyParams& params, const SweepSpec& sweep,
                                    const SubordinationSpec& spec);

/// Per-ball certificate of the kernel-splitting proof: the normalized form of
/// C_S R^{m/p} rho^{-(m-lambda)/p} + C_T (R + rho)^{lambda/p} at rho = R,
/// i.e. (C_S + C_T 2^{lambda/p}) R^{lambda/p} A(R)^{-lambda/(m p)}.
double kernel_split_bound(double C_S, double C_T, const MorreyParams& params,
                          const ModelManifold& M, double R);

}  // namespace morsem
