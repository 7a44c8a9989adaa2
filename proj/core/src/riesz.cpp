#include "morsem/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morsem/errors.hpp"
#include "morsem/parallel.hpp"

namespace morsem {

namespace {

struct TailModel {
    double remainder = 0.0;
    double rate = 0.0;
};

// Bound int_{T}^inf t^{-1/2} |g(t)| dt from sampled |g| near T. Hyperbolic
// flows of decaying data ride the spectral gap; non-decaying Morrey data
// (and every Euclidean case) only offer power decay, so the exponential fit
// falls back to the power-law bound when the measured rate is too weak to
// matter over the window.
TailModel certify_tail(const ModelManifold& M, const std::vector<std::pair<double, double>>& gs,
                       double T_max, double tail_tol) {
    double gT = std::fabs(gs.back().second);
    TailModel tail;
    if (gT <= 1e-290) return tail;
    bool exp_certified = false;
    if (M.is_hyperbolic()) {
        FitResult fit = fit_exp_rate(gs, gs.front().first, T_max * (1.0 + 1e-12));
        if (fit.slope * T_max > 4.0) {
            tail.rate = fit.slope;
            tail.remainder = gT / (std::sqrt(T_max) * tail.rate);
            exp_certified = true;
        }
    }
    if (!exp_certified) {
        FitResult fit = fit_loglog_slope(gs, gs.front().first, T_max * (1.0 + 1e-12));
        double a = -fit.slope;
        tail.rate = a;
        if (!(a > 0.6))
            throw TailBoundError("riesz: gradient decay too slow to truncate",
                                 gT * std::sqrt(T_max));
        tail.remainder = gT * std::sqrt(T_max) / (a - 0.5);
    }
    if (!(tail.remainder <= tail_tol))
        throw TailBoundError("riesz: tail remainder above tolerance", tail.remainder);
    return tail;
}

// The gradient flow at offset d peaks near t = d^2/6 on R^m (the bump has to
// reach the probe) and near t = d/2 under hyperbolic drift; the truncation
// point must sit well past that before the decay window means anything.
double offset_T_max(const ModelManifold& M, double T_max, double d) {
    if (M.is_hyperbolic()) return std::max(T_max, 2.0 * d);
    return std::max({T_max, 200.0, 2.0 * d * d + 10.0});
}

}  // namespace

RieszValues riesz_apply_radial(const ModelManifold& M, const RadialProfile& f,
                               const std::vector<double>& offsets,
                               const SubordinationSpec& spec) {
    spec.validate();
    const double inv_gamma_half = 1.0 / std::sqrt(pi);  // Gamma(1/2)^{-1}

    RieszValues out;
    out.values.assign(offsets.size(), 0.0);
    std::vector<double> remainders(offsets.size(), 0.0);
    std::vector<double> rates(offsets.size(), 0.0);

    parallel_for(offsets.size(), [&](std::size_t i) {
        double d = offsets[i];
        if (d == 0.0) {
            out.values[i] = 0.0;
            return;
        }
        auto grad_at = [&](double t) {
            return apply_grad_heat_radial_signed(M, f, t, {d}, 0.0, spec.quad)[0];
        };
        // certify the truncation from the measured decay at this offset,
        // pushing T_d out until the remainder bound meets the tolerance
        double T_d = offset_T_max(M, spec.T_max, d);
        TailModel tail;
        for (int attempt = 0;; ++attempt) {
            double lo = M.is_hyperbolic() ? std::max(spec.t_split, T_d / 4.0) : T_d / 10.0;
            std::vector<std::pair<double, double>> samples;
            for (double t : log_grid(lo, T_d, 7))
                samples.emplace_back(t, std::max(std::fabs(grad_at(t)), 1e-300));
            try {
                tail = certify_tail(M, samples, T_d, spec.tail_tol);
                break;
            } catch (const TailBoundError&) {
                if (attempt >= 14) throw;
                T_d *= 2.0;
            }
        }
        remainders[i] = tail.remainder;
        rates[i] = tail.rate;

        // t = s^2 on (0, t_split]
        auto small_part = [&](double s) { return 2.0 * grad_at(s * s); };
        QuadSpec qs = spec.quad;
        qs.singular_points.clear();
        double small = integrate_adaptive_1d(small_part, 0.0, std::sqrt(spec.t_split), qs).value;
        // large part in log time so that decades carry equal panel weight
        auto large_part = [&](double x) {
            double t = std::exp(x);
            return grad_at(t) * std::sqrt(t);  // t^{-1/2} dt = t^{1/2} dx
        };
        double large = integrate_adaptive_1d(large_part, std::log(spec.t_split),
                                             std::log(T_d), qs)
                           .value;
        out.values[i] = inv_gamma_half * (small + large);
    });
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        out.tail_remainder = std::max(out.tail_remainder, remainders[i]);
        out.tail_rate = std::max(out.tail_rate, rates[i]);
    }
    return out;
}

RieszBoundReport riesz_bound_report(const ModelManifold& M,
                                    const std::vector<RadialProfile>& profiles,
                                    const MorreyParams& params, const SweepSpec& sweep,
                                    const SubordinationSpec& spec) {
    if (profiles.empty()) throw std::invalid_argument("riesz_bound_report: empty profile family");
    RieszBoundReport rep;
    const double r_hi = sweep.R_grid.back() + sweep.d_grid.back();
    std::vector<double> offsets = log_grid(1e-2, r_hi, 56);
    for (const RadialProfile& f : profiles) {
        double in_norm = morrey_norm_radial(f, params, M, sweep, spec.quad).value;
        RieszValues rv = riesz_apply_radial(M, f, offsets, spec);
        Decay hint = M.is_hyperbolic() ? Decay::exponential(1.0)
                                       : Decay::power(std::max(1.0, f.decay.eta));
        SampledRadialProfile snap(offsets, rv.values, f.singularity_exponent, hint);
        double out_norm = morrey_norm_radial(snap.as_profile(), params, M, sweep, spec.quad).value;
        rep.input_norms.push_back(in_norm);
        rep.output_norms.push_back(out_norm);
        rep.ratios.push_back(in_norm > 0.0 ? out_norm / in_norm
                                           : std::numeric_limits<double>::infinity());
    }
    rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

double kernel_split_bound(double C_S, double C_T, const MorreyParams& params,
                          const ModelManifold& M, double R) {
    if (!(R > 0.0)) throw std::domain_error("kernel_split_bound: R > 0 required");
    if (!(C_S >= 0.0 && C_T >= 0.0))
        throw std::domain_error("kernel_split_bound: constants must be >= 0");
    params.check_against(M.m);
    double lp = params.lambda / params.p;
    double raw = (C_S + C_T * std::pow(2.0, lp)) * std::pow(R, lp);
    double norm = std::exp((-params.lambda / (M.m * params.p)) *
                           log_normalizer(params, M, BallSpec(0.0, R)));
    return raw * norm;
}

}  // namespace morsem
