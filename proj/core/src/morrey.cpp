#include "morsem/morrey.hpp"

#include <algorithm>
#include <cmath>

#include "morsem/errors.hpp"

namespace morsem {

double log_normalizer(const MorreyParams& params, const ModelManifold& M, const BallSpec& ball) {
    params.check_against(M.m);
    const double R = ball.radius;
    switch (params.variant) {
        case MorreyVariant::g:
            return log_ball_volume(M, R);
        case MorreyVariant::K_model: {
            if (M.K() > 0.0) return log_ball_volume(ModelManifold::hyperbolic(M.m, M.K()), R);
            return log_ball_volume(ModelManifold::euclidean(M.m), R);
        }
        case MorreyVariant::plain:
            return M.m * std::log(R);
        case MorreyVariant::exponential:
            return std::sqrt(M.K()) * (M.m - 1) * R;
    }
    throw std::invalid_argument("normalizer: unknown variant");
}

double normalizer(const MorreyParams& params, const ModelManifold& M, const BallSpec& ball) {
    return exp_checked(log_normalizer(params, M, ball), "normalizer overflow");
}

double morrey_ball_quantity(const RadialProfile& f, const MorreyParams& params,
                            const ModelManifold& M, const BallSpec& ball, const QuadSpec& quad) {
    params.check_against(M.m);
    double mass = integrate_polar_ball(M, f, params.p, ball, quad);
    if (mass <= 0.0) return 0.0;
    double log_q = (-params.lambda / M.m) * log_normalizer(params, M, ball) + std::log(mass);
    return std::exp(log_q / params.p);
}

MorreyEstimate morrey_norm_radial(const RadialProfile& f, const MorreyParams& params,
                                  const ModelManifold& M, const SweepSpec& sweep,
                                  const QuadSpec& quad) {
    params.check_against(M.m);
    if (f.singularity_exponent * params.p >= M.m)
        throw DivergentIntegralError("morrey_norm_radial: l*p >= m, norm diverges locally");
    auto objective = [&](const BallSpec& ball) {
        return morrey_ball_quantity(f, params, M, ball, quad);
    };
    SupResult sup = sup_sweep(objective, sweep);
    return MorreyEstimate{sup.sup_estimate, sup.argmax};
}

ExampleProfile example_profile(const ModelManifold& M, double p, double lambda, double l,
                               double k, bool gaussian) {
    MorreyParams params(p, lambda);
    params.check_against(M.m);
    ExampleProfile out;
    out.profile = power_exp_profile(l, k, gaussian);
    double eta = (M.m - lambda) / p;
    double k_min = (M.m - 1) * std::sqrt(M.K()) / p;
    out.member = (l >= 0.0 && l <= eta && k >= k_min && lambda > 0.0 &&
                  l * p < M.m);
    return out;
}

namespace {

double centered_mass(const RadialProfile& f, double p, const ModelManifold& M, double r,
                     const QuadSpec& quad) {
    if (!(r >= 0.0)) throw std::domain_error("radial_mass: r >= 0 required");
    if (f.singularity_exponent * p >= M.m)
        throw DivergentIntegralError("radial_mass: l*p >= m, integral diverges");
    if (r == 0.0) return 0.0;
    const double omega = sphere_area(M.m);
    auto g = [&](double s) {
        double v = f(s);
        return std::pow(std::fabs(v), p) * volume_jacobian(M, s) * omega;
    };
    QuadSpec spec = quad;
    spec.singular_points = f.singularity_exponent > 0.0 ? std::vector<double>{0.0}
                                                        : std::vector<double>{};
    return integrate_adaptive_1d(g, 0.0, r, spec).value;
}

}  // namespace

double radial_mass(const RadialProfile& f, double p, const ModelManifold& M, double r,
                   const QuadSpec& quad) {
    return centered_mass(f, p, M, r, quad);
}

double lp_ball_integral(const RadialProfile& f, double p, const ModelManifold& M, double R,
                        const QuadSpec& quad) {
    return centered_mass(f, p, M, R, quad);
}

namespace {

// Per-ball quantities for a batch of profiles on the identical grid. Holder
// and inclusion transfer exactly per ball, so comparing grid sups needs the
// same balls on both sides.
std::vector<BallSpec> grid_balls(const SweepSpec& sweep) {
    std::vector<BallSpec> balls;
    balls.reserve(sweep.d_grid.size() * sweep.R_grid.size());
    for (double d : sweep.d_grid)
        for (double R : sweep.R_grid) balls.emplace_back(d, R);
    return balls;
}

}  // namespace

HolderCheck holder_check(const RadialProfile& f, const RadialProfile& h, double p, double q,
                         double lambda, double mu, const ModelManifold& M,
                         const SweepSpec& sweep, const QuadSpec& quad) {
    if (!(p >= 1.0 && q >= 1.0)) throw std::domain_error("holder_check: p, q >= 1 required");
    double r = 1.0 / (1.0 / p + 1.0 / q);
    if (!(r >= 1.0)) throw std::domain_error("holder_check: resulting r < 1");
    double tau = r * (lambda / p + mu / q);
    if (!(tau >= 0.0 && tau < M.m) || !(lambda < M.m) || !(mu < M.m))
        throw std::domain_error("holder_check: exponent out of range");

    RadialProfile fh;
    fh.singularity_exponent = f.singularity_exponent + h.singularity_exponent;
    fh.decay = f.decay;
    auto fe = f.eval;
    auto he = h.eval;
    fh.eval = [fe, he](double s) { return fe(s) * he(s); };

    MorreyParams pf(p, lambda), ph(q, mu), pfh(r, tau);
    HolderCheck out;
    out.per_ball_pass = true;
    double sup_f = 0.0, sup_h = 0.0, sup_fh = 0.0;
    for (const BallSpec& ball : grid_balls(sweep)) {
        double qf = morrey_ball_quantity(f, pf, M, ball, quad);
        double qh = morrey_ball_quantity(h, ph, M, ball, quad);
        double qfh = morrey_ball_quantity(fh, pfh, M, ball, quad);
        sup_f = std::max(sup_f, qf);
        sup_h = std::max(sup_h, qh);
        sup_fh = std::max(sup_fh, qfh);
        if (qfh > qf * qh * (1.0 + 1e-6)) out.per_ball_pass = false;
    }
    out.lhs = sup_fh;
    out.rhs = sup_f * sup_h;
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

InclusionCheck inclusion_check(const RadialProfile& f, double q, double mu, double p,
                               double lambda, const ModelManifold& M, const SweepSpec& sweep,
                               const QuadSpec& quad) {
    if (!(p <= q)) throw std::domain_error("inclusion_check: requires p <= q");
    double lhs_scale = (M.m - lambda) / p;
    double rhs_scale = (M.m - mu) / q;
    if (std::fabs(lhs_scale - rhs_scale) > 1e-12 * std::max(1.0, std::fabs(lhs_scale)))
        throw std::domain_error("inclusion_check: scaling (m-lambda)/p == (m-mu)/q required");

    MorreyParams plow(p, lambda, MorreyVariant::g), phigh(q, mu, MorreyVariant::g);
    InclusionCheck out;
    out.per_ball_pass = true;
    double sup_low = 0.0, sup_high = 0.0;
    for (const BallSpec& ball : grid_balls(sweep)) {
        double ql = morrey_ball_quantity(f, plow, M, ball, quad);
        double qh = morrey_ball_quantity(f, phigh, M, ball, quad);
        sup_low = std::max(sup_low, ql);
        sup_high = std::max(sup_high, qh);
        if (ql > qh * (1.0 + 1e-6)) out.per_ball_pass = false;
    }
    out.lhs = sup_low;
    out.rhs = sup_high;
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

BumpTrainProfile::BumpTrainProfile(std::vector<double> centers_) : centers(std::move(centers_)) {
    if (centers.empty()) throw std::domain_error("BumpTrainProfile: at least one bump");
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (centers[i] < 0.0) throw std::domain_error("BumpTrainProfile: centers >= 0");
        if (i > 0 && !(centers[i] - centers[i - 1] > 2.0))
            throw std::domain_error("BumpTrainProfile: separation must exceed 2");
    }
}

BumpTrainBound bump_train_bound(const BumpTrainProfile& train, const MorreyParams& params,
                                const ModelManifold& M, const QuadSpec& quad) {
    params.check_against(M.m);
    BumpTrainBound out;

    // Each bump n has |phi_n| <= 1 and support in the unit ball about its
    // center, so a ball of radius R holds at most N(R) bump masses, each at
    // most the unit-ball volume.
    const double unit_vol = ball_volume(M, 1.0);
    double best = 0.0;
    for (double R : log_grid(0.5, 2.0 * (train.centers.back() + 2.0), 60)) {
        // centers lie on a ray with separation > 2: a ball of radius R meets
        // at most floor(R + 1) + 1 of them
        double count = std::min<double>(train.centers.size(), std::floor(R + 1.0) + 1.0);
        double log_q = (-params.lambda / M.m) * log_normalizer(params, M, BallSpec(0.0, R)) +
                       std::log(count * unit_vol);
        best = std::max(best, std::exp(log_q / params.p));
    }
    out.morrey_upper_bound = best;

    // Partial L^p masses over B(r_n + 1): disjoint supports add a fixed
    // positive mass per bump (quadrature per bump in its own polar frame).
    double acc = 0.0;
    for (std::size_t n = 0; n < train.centers.size(); ++n) {
        double freq = 2.0 * pi * static_cast<double>(n + 1);
        auto bump_pow = [&](double s) {
            double v = std::fabs(std::sin(freq * s));
            return std::pow(v, params.p) * volume_jacobian(M, s) * sphere_area(M.m);
        };
        QuadSpec spec = quad;
        spec.singular_points.clear();
        acc += integrate_adaptive_1d(bump_pow, 0.0, 1.0, spec).value;
        out.lp_partial_sums.push_back(acc);
    }
    out.sup_norm = 1.0;
    return out;
}

}  // namespace morsem
