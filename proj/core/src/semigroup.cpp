#include "morsem/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morsem/errors.hpp"
#include "morsem/kernels.hpp"
#include "morsem/parallel.hpp"

namespace morsem {

double RateConstants::sigma_nu(double nu) const {
    return c0 + nu * (alpha_pq + k * lambda * gamma_g / (m * q));
}

double RateConstants::damped_rate() const {
    return std::max(0.0, c0 + alpha_pq - k * lambda * gamma_g / (m * q));
}

RateConstants rate_constants(const ModelManifold& M, double p, double q, double lambda,
                             double c) {
    if (!(p >= 1.0 && q >= p)) throw std::domain_error("rate_constants: 1 <= p <= q required");
    if (!(lambda >= 0.0 && lambda < M.m))
        throw std::domain_error("rate_constants: lambda in [0, m) required");
    if (!(c > 0.0 && c < 0.25)) throw std::domain_error("rate_constants: c in (0, 1/4) required");
    RateConstants rc;
    rc.m = M.m;
    rc.K = M.K();
    rc.c0 = M.c0();
    rc.lambda1 = M.lambda1();
    rc.p = p;
    rc.q = q;
    rc.lambda = lambda;
    rc.c = c;
    rc.k = std::sqrt(rc.K) * (M.m - 1);
    const double inv = 1.0 / (0.25 - c);
    rc.gamma = rc.k * (lambda / M.m) * inv;
    rc.gamma_g = rc.k * (1.0 + lambda / M.m) * inv;
    rc.delta_m = std::max(0.0, 0.25 * (rc.c0 * rc.c0 + (M.m - 1) * (M.m - 2) * M.kappa_star()));
    rc.alpha_p = std::min(4.0 * rc.delta_m * (p - 1.0) / (p * p), rc.lambda1 / p);
    rc.alpha_pq = std::min(4.0 * rc.delta_m * (p - 1.0) / (p * q), rc.lambda1 / q);
    rc.beta = 0.5 * rc.damped_rate();
    return rc;
}

SmallnessCheck smallness_condition_check(const ModelManifold& M, double p, double lambda,
                                         double c) {
    RateConstants rc = rate_constants(M, p, p, lambda, c);
    SmallnessCheck out;
    out.lhs = rc.k * rc.k * (lambda / (M.m * p)) * (1.0 + lambda / M.m) / (0.25 - c);
    out.rhs = rc.alpha_p;
    out.satisfied = out.lhs <= out.rhs + 1e-15;
    return out;
}

namespace {

// For m = 3 the angular kernel integral is exact on both model kinds:
//   u(t,d) = (4 pi t)^{-1/2} e^{-kappa t} S(d)^{-1}
//            int_0^inf f(rho) S(rho) [E(d-rho) - E(d+rho)] drho
// with S(x) = sinh(sqrt(kappa) x)/sqrt(kappa) (x when kappa = 0) and
// E(x) = e^{-x^2/(4t)}. lambda1 = kappa when m = 3, so the prefactor carries
// the full spectral decay. Everything is assembled in log space: at large
// drift times S(rho) alone overflows while the combination stays tame.
struct Ring3 {
    const ModelManifold& M;
    double t;

    double log_S(double x) const {
        if (!M.is_hyperbolic()) return std::log(x);
        double sk = M.sqrt_kappa();
        return log_sinh(sk * x) - std::log(sk);
    }
    double S(double x) const {
        if (!M.is_hyperbolic()) return x;
        double sk = M.sqrt_kappa();
        return x * sinhc(sk * x);
    }
    double Sprime_over_S(double x) const {
        if (!M.is_hyperbolic()) return 1.0 / x;
        double sk = M.sqrt_kappa();
        return sk / std::tanh(sk * x);
    }
    // log of the full prefactor x S(rho)/S(d) x e^{-(d -/+ rho)^2/4t}
    double log_term(double d, double rho, double sign) const {
        double lam = M.is_hyperbolic() ? M.kappa : 0.0;
        double x = d + sign * rho;
        return log_S(rho) - log_S(d) - x * x / (4.0 * t) - lam * t -
               0.5 * std::log(4.0 * pi * t);
    }
    // f-weight of the value kernel at offset d > 0, prefactors included
    double value_weight(double d, double rho) const {
        double la = log_term(d, rho, -1.0);
        if (la < -700.0) return 0.0;
        return std::exp(la) * (-std::expm1(-d * rho / t));
    }
    // d -> 0 limit of value_weight / (as a density in rho)
    double value_weight_origin(double rho) const {
        double lam = M.is_hyperbolic() ? M.kappa : 0.0;
        double la = log_S(rho) - rho * rho / (4.0 * t) - lam * t -
                    0.5 * std::log(4.0 * pi * t) + std::log(rho / t);
        return la < -700.0 ? 0.0 : std::exp(la);
    }
    // f-weight of the gradient kernel at offset d > 0; B = A e^{-d rho/t}
    // exactly, so both combinations ride expm1 instead of cancelling
    double grad_weight(double d, double rho) const {
        double la = log_term(d, rho, -1.0);
        if (la < -700.0) return 0.0;
        double A = std::exp(la);
        double x = d * rho / t;
        double em = std::expm1(-x);  // e^{-x} - 1
        double AmB = -A * em;        // A - B
        double b = d + rho;
        double second = A * (2.0 * rho + b * em) / (2.0 * t);  // -(a A - b B)/(2t)
        return -Sprime_over_S(d) * AmB + second;
    }
};

double tail_cutoff(const ModelManifold& M, const RadialProfile& f, double t, double d) {
    double drift = (M.m - 1) * M.sqrt_kappa() * t;
    double r = d + drift + 14.0 * std::sqrt(t) + 5.0;
    if (f.decay.type == Decay::Type::compact) r = std::min(r, f.decay.support + 1e-2);
    return r;
}

// The ring integrand concentrates in a width ~ sqrt(t) window around the
// (drifted) offset; pin it so coarse panels cannot step over the peak.
std::vector<double> peak_splits(const ModelManifold& M, double t, double d, double hi) {
    double drift = (M.m - 1) * M.sqrt_kappa() * t;
    double center = d + drift;
    double w = 14.0 * std::sqrt(t);
    std::vector<double> s;
    for (double x : {center - w, center - 0.25 * w, center, center + 0.25 * w, center + w})
        if (x > 1e-14 && x < hi) s.push_back(x);
    return s;
}

double evolve_value_m3(const ModelManifold& M, const RadialProfile& f, double t, double d,
                       const QuadSpec& spec) {
    Ring3 ring{M, t};
    double hi = tail_cutoff(M, f, t, d);
    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        double v = f(rho);
        if (v == 0.0) return 0.0;
        double w = (d <= 0.0) ? ring.value_weight_origin(rho) : ring.value_weight(d, rho);
        return v * w;
    };
    QuadSpec s = spec;
    s.singular_points =
        f.singularity_exponent > 0.0 ? std::vector<double>{0.0} : std::vector<double>{};
    s.split_points = peak_splits(M, t, d, hi);
    return integrate_adaptive_1d(integrand, 0.0, hi, s).value;
}

double evolve_grad_value_m3(const ModelManifold& M, const RadialProfile& f, double t, double d,
                            const QuadSpec& spec) {
    if (d < 1e-3) {
        double h = 1e-3;
        double up = evolve_value_m3(M, f, t, d + h, spec);
        double um = evolve_value_m3(M, f, t, std::fabs(d - h), spec);
        return (up - um) / (2.0 * h);
    }
    Ring3 ring{M, t};
    double hi = tail_cutoff(M, f, t, d);
    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        double v = f(rho);
        if (v == 0.0) return 0.0;
        return v * ring.grad_weight(d, rho);
    };
    QuadSpec s = spec;
    s.singular_points =
        f.singularity_exponent > 0.0 ? std::vector<double>{0.0} : std::vector<double>{};
    s.split_points = peak_splits(M, t, d, hi);
    return integrate_adaptive_1d(integrand, 0.0, hi, s).value;
}

// Generic nested polar quadrature for m != 3.
double evolve_value_polar(const ModelManifold& M, const RadialProfile& f, double t, double d,
                          const QuadSpec& spec, bool gradient) {
    HeatKernelModel model = HeatKernelModel::for_manifold(M);
    const double omega_inner = (M.m == 2) ? 2.0 : sphere_area(M.m - 1);
    double hi = tail_cutoff(M, f, t, d);
    QuadSpec inner_spec = spec;
    inner_spec.singular_points.clear();
    inner_spec.rel_tol = 0.25 * spec.rel_tol;
    auto integrand = [&](double rho) {
        double v = f(rho);
        if (v == 0.0) return 0.0;
        auto ang = [&](double theta) {
            double dist = geodesic_distance_polar(M, d, rho, theta);
            double kern;
            if (!gradient) {
                kern = heat_kernel(model, t, dist);
            } else {
                kern = heat_kernel_dr(model, t, dist) *
                       geodesic_distance_polar_dd(M, d, rho, theta);
            }
            return kern * std::pow(std::sin(theta), M.m - 2);
        };
        double inner = integrate_adaptive_1d(ang, 0.0, pi, inner_spec).value;
        return v * inner * volume_jacobian(M, rho) * omega_inner;
    };
    QuadSpec s = spec;
    s.singular_points =
        f.singularity_exponent > 0.0 ? std::vector<double>{0.0} : std::vector<double>{};
    s.split_points = peak_splits(M, t, d, hi);
    return integrate_adaptive_1d(integrand, 0.0, hi, s).value;
}

double evolve_value(const ModelManifold& M, const RadialProfile& f, double t, double d,
                    const QuadSpec& spec) {
    if (M.m == 3) return evolve_value_m3(M, f, t, d, spec);
    return evolve_value_polar(M, f, t, d, spec, false);
}

double evolve_grad_value(const ModelManifold& M, const RadialProfile& f, double t, double d,
                         const QuadSpec& spec) {
    if (M.m == 3) return evolve_grad_value_m3(M, f, t, d, spec);
    if (d == 0.0) return 0.0;
    return evolve_value_polar(M, f, t, d, spec, true);
}

}  // namespace

std::vector<double> apply_heat_radial(const ModelManifold& M, const RadialProfile& f, double t,
                                      const std::vector<double>& offsets, double c_eff,
                                      const QuadSpec& spec) {
    if (!(t > 0.0)) throw std::domain_error("apply_heat_radial: t > 0 required");
    if (c_eff < 0.0) throw std::domain_error("apply_heat_radial: c_eff >= 0 required");
    std::vector<double> out(offsets.size());
    const double damp = std::exp(-c_eff * t);
    parallel_for(offsets.size(), [&](std::size_t i) {
        out[i] = damp * evolve_value(M, f, t, offsets[i], spec);
    });
    return out;
}

std::vector<double> apply_grad_heat_radial_signed(const ModelManifold& M,
                                                  const RadialProfile& f, double t,
                                                  const std::vector<double>& offsets,
                                                  double c_eff, const QuadSpec& spec) {
    if (!(t > 0.0)) throw std::domain_error("apply_grad_heat_radial: t > 0 required");
    std::vector<double> out(offsets.size());
    const double damp = std::exp(-c_eff * t);
    parallel_for(offsets.size(), [&](std::size_t i) {
        out[i] = (offsets[i] == 0.0) ? 0.0 : damp * evolve_grad_value(M, f, t, offsets[i], spec);
    });
    return out;
}

std::vector<double> apply_grad_heat_radial(const ModelManifold& M, const RadialProfile& f,
                                           double t, const std::vector<double>& offsets,
                                           double c_eff, const QuadSpec& spec) {
    std::vector<double> out = apply_grad_heat_radial_signed(M, f, t, offsets, c_eff, spec);
    for (double& v : out) v = std::fabs(v);
    return out;
}

double predicted_bound(EstimateId id, const RateConstants& rc, double input_norm, double t) {
    if (!(t > 0.0)) throw std::domain_error("predicted_bound: t > 0 required");
    const double d = RateConstants::d_of_t(t);
    const double pq = 1.0 / rc.p - 1.0 / rc.q;
    double log_b;
    switch (id) {
        case EstimateId::dispersive_sup:
            log_b = (-0.5 * rc.m * std::log(d) + 0.5 * rc.lambda * std::log(t)) / rc.p -
                    (rc.lambda1 - rc.k * rc.lambda * rc.gamma / rc.m) * t / rc.p;
            break;
        case EstimateId::dispersive_sup_plain:
            log_b = (-0.5 * rc.m * std::log(d) + 0.5 * rc.lambda * std::log(t)) / rc.p -
                    rc.lambda1 * t / rc.p;
            break;
        case EstimateId::dispersive_same_exponent:
            log_b = -rc.alpha_p * t + rc.k * rc.lambda * rc.gamma_g * t / (rc.m * rc.p);
            break;
        case EstimateId::dispersive_pq:
            log_b = pq * (-0.5 * rc.m * std::log(d) + 0.5 * rc.lambda * std::log(t)) -
                    rc.alpha_pq * t + rc.k * rc.lambda * rc.gamma_g * t / (rc.m * rc.q);
            break;
        case EstimateId::dispersive_pq_damped:
            log_b = pq * (-0.5 * rc.m * std::log(d) + 0.5 * rc.lambda * std::log(t)) -
                    (rc.c0 + rc.alpha_pq) * t + rc.k * rc.lambda * rc.gamma_g * t / (rc.m * rc.q);
            break;
        case EstimateId::smoothing_pq:
            log_b = (-0.5 - 0.5 * rc.m * pq) * std::log(d) + 0.5 * rc.lambda * pq * std::log(t) -
                    rc.alpha_pq * t + rc.k * rc.lambda * rc.gamma_g * t / (rc.m * rc.q);
            break;
        case EstimateId::smoothing_pq_damped:
            log_b = (-0.5 - 0.5 * rc.m * pq) * std::log(d) + 0.5 * rc.lambda * pq * std::log(t) -
                    (rc.c0 + rc.alpha_pq) * t + rc.k * rc.lambda * rc.gamma_g * t / (rc.m * rc.q);
            break;
        case EstimateId::smoothing_rate_only:
            log_b = (-0.5 - 0.5 * rc.m * pq) * std::log(d) + 0.5 * rc.lambda * pq * std::log(t) -
                    rc.beta * t;
            break;
        case EstimateId::flat_dispersive_sup:
            log_b = -0.5 * (rc.m - rc.lambda) / rc.p * std::log(t);
            break;
        case EstimateId::flat_dispersive_pq:
            log_b = -0.5 * (rc.m - rc.lambda) * pq * std::log(t);
            break;
        case EstimateId::flat_smoothing_pq:
            log_b = (-0.5 - 0.5 * (rc.m - rc.lambda) * pq) * std::log(t);
            break;
        case EstimateId::viscous_dispersive_pq:
            log_b = pq * (-0.5 * rc.m * std::log(d) + 0.5 * rc.lambda * std::log(t)) -
                    rc.sigma_nu(1.0) * t;
            break;
        case EstimateId::viscous_smoothing_pq:
            log_b = (-0.5 - 0.5 * rc.m * pq) * std::log(d) + 0.5 * rc.lambda * pq * std::log(t) -
                    rc.sigma_nu(1.0) * t;
            break;
        default:
            throw std::invalid_argument("predicted_bound: unknown estimate id");
    }
    return input_norm * std::exp(log_b);
}

std::vector<double> evolution_offsets(const ModelManifold& M, double t, double r_max_hint,
                                      int count) {
    double drift = (M.m - 1) * M.sqrt_kappa() * t;
    double r_hi = std::max(r_max_hint, drift + 14.0 * std::sqrt(t) + 5.0);
    std::vector<double> grid = log_grid(1e-2, r_hi, count - 1);
    grid.insert(grid.begin(), 0.0);
    return grid;
}

SampledRadialProfile evolve_snapshot(const ModelManifold& M, const RadialProfile& f, double t,
                                     double c_eff, const std::vector<double>& offsets,
                                     const QuadSpec& spec) {
    std::vector<double> values = apply_heat_radial(M, f, t, offsets, c_eff, spec);
    Decay hint = M.is_hyperbolic() ? Decay::exponential(1.0) : Decay::exp_square(1.0 / (4.0 * t));
    if (!M.is_hyperbolic() && f.decay.type == Decay::Type::power) hint = Decay::power(f.decay.eta);
    return SampledRadialProfile(offsets, values, 0.0, hint);
}

namespace {

DispersiveReport verify_impl(const ModelManifold& M, const RadialProfile& f,
                             const DispersiveSpec& spec, const SweepSpec& sweep,
                             const QuadSpec& quad, bool gradient) {
    if (spec.t_grid.size() < 6)
        throw InsufficientDataError("verify: need at least 6 time points");
    double tspan = spec.t_grid.back() / spec.t_grid.front();
    if (!(tspan >= 99.0))
        throw InsufficientDataError("verify: time grid must span at least two decades");

    MorreyParams in_params(spec.p, spec.lambda, spec.variant);
    MorreyParams out_params(spec.q, spec.lambda, spec.variant);
    RateConstants rc = rate_constants(M, spec.p, spec.q, spec.lambda, spec.c);

    DispersiveReport rep;
    rep.input_norm = morrey_norm_radial(f, in_params, M, sweep, quad).value;

    double r_hint = sweep.R_grid.back() + sweep.d_grid.back();
    rep.norms.resize(spec.t_grid.size());
    std::vector<double> ratios(spec.t_grid.size());
    parallel_for(spec.t_grid.size(), [&](std::size_t i) {
        double t = spec.t_grid[i];
        std::vector<double> offsets = evolution_offsets(M, t, r_hint, 72);
        double norm;
        if (spec.sup_norm && !gradient) {
            std::vector<double> u = apply_heat_radial(M, f, t, offsets, spec.c_eff, quad);
            norm = 0.0;
            for (double v : u) norm = std::max(norm, std::fabs(v));
        } else if (spec.sup_norm && gradient) {
            std::vector<double> g = apply_grad_heat_radial(M, f, t, offsets, spec.c_eff, quad);
            norm = 0.0;
            for (double v : g) norm = std::max(norm, v);
        } else {
            std::vector<double> vals =
                gradient ? apply_grad_heat_radial(M, f, t, offsets, spec.c_eff, quad)
                         : apply_heat_radial(M, f, t, offsets, spec.c_eff, quad);
            Decay hint = M.is_hyperbolic() ? Decay::exponential(1.0)
                                           : Decay::exp_square(1.0 / (4.0 * t));
            if (!M.is_hyperbolic() && f.decay.type == Decay::Type::power)
                hint = Decay::power(f.decay.eta + (gradient ? 1.0 : 0.0));
            SampledRadialProfile snap(offsets, vals, 0.0, hint);
            norm = morrey_norm_radial(snap.as_profile(), out_params, M, sweep, quad).value;
        }
        rep.norms[i] = {t, norm};
        double bound = predicted_bound(spec.bound, rc, rep.input_norm, t);
        ratios[i] = bound > 0.0 ? norm / bound : std::numeric_limits<double>::infinity();
    });
    rep.sup_ratio = *std::max_element(ratios.begin(), ratios.end());
    rep.C_emp = rep.sup_ratio;

    try {
        rep.small_t_slope = fit_loglog_slope(rep.norms, 0.0, spec.small_t_max);
    } catch (const InsufficientDataError&) {
    }
    if (M.is_hyperbolic()) {
        try {
            rep.large_t_rate =
                fit_exp_rate(rep.norms, spec.large_t_min, spec.t_grid.back() * (1 + 1e-12));
        } catch (const InsufficientDataError&) {
        }
    }
    return rep;
}

}  // namespace

DispersiveReport verify_dispersive(const ModelManifold& M, const RadialProfile& f,
                                   const DispersiveSpec& spec, const SweepSpec& sweep,
                                   const QuadSpec& quad) {
    return verify_impl(M, f, spec, sweep, quad, false);
}

DispersiveReport verify_smoothing(const ModelManifold& M, const RadialProfile& f,
                                  const DispersiveSpec& spec, const SweepSpec& sweep,
                                  const QuadSpec& quad) {
    return verify_impl(M, f, spec, sweep, quad, true);
}

InterpolationCheck interpolation_check(const SampledRadialProfile& u, double p, double q,
                                       double lambda, MorreyVariant variant,
                                       const ModelManifold& M, const SweepSpec& sweep,
                                       const QuadSpec& quad) {
    if (!(p <= q)) throw std::domain_error("interpolation_check: p <= q required");
    RadialProfile prof = u.as_profile();
    double sup = 0.0;
    for (double v : u.values()) sup = std::max(sup, std::fabs(v));
    MorreyParams pp(p, lambda, variant), pq(q, lambda, variant);
    InterpolationCheck out;
    out.per_ball_pass = true;
    double sup_p = 0.0, sup_q = 0.0;
    for (double d : sweep.d_grid)
        for (double R : sweep.R_grid) {
            BallSpec ball(d, R);
            double qp = morrey_ball_quantity(prof, pp, M, ball, quad);
            double qq = morrey_ball_quantity(prof, pq, M, ball, quad);
            sup_p = std::max(sup_p, qp);
            sup_q = std::max(sup_q, qq);
            double rhs = std::pow(sup, 1.0 - p / q) * std::pow(qp, p / q);
            if (qq > rhs * (1.0 + 1e-6)) out.per_ball_pass = false;
        }
    out.lhs = sup_q;
    out.rhs = std::pow(sup, 1.0 - p / q) * std::pow(sup_p, p / q);
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

}  // namespace morsem
