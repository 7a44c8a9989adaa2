#include "morsem/kernels.hpp"

#include <cmath>
#include <limits>
#include <tuple>

#include "morsem/errors.hpp"

namespace morsem {

HeatKernelModel HeatKernelModel::for_manifold(const ModelManifold& M) {
    if (!M.is_hyperbolic()) return HeatKernelModel{M, Form::gaussian};
    if (M.m % 2 == 0 || M.m < 3)
        throw std::domain_error("heat kernel: hyperbolic closed form needs odd m >= 3");
    if (M.m > 5)
        throw std::domain_error("heat kernel: hyperbolic closed form implemented for m in {3,5}");
    return HeatKernelModel{M, Form::hyperbolic_odd_closed_form};
}

namespace {

struct KernelLog {
    double logp;  // log p(t, r)
    double dl;    // d_r log p
    double d2l;   // d^2_r log p
};

// Unit-curvature hyperbolic closed forms, m = 3 and m = 5.
KernelLog unit_h3(double t, double r) {
    KernelLog k;
    double log_rs = -std::log(sinhc(r));  // log(r / sinh r)
    k.logp = -1.5 * std::log(4.0 * pi * t) - t - r * r / (4.0 * t) + log_rs;
    k.dl = -r / (2.0 * t) - coth_minus_inv(r);
    k.d2l = -1.0 / (2.0 * t) + csch2_minus_inv2(r);
    return k;
}

// Q = r coth r - 1 + r^2/(2t); p5 = (2 pi)^{-1} (4 pi t)^{-3/2}
//   e^{-4t - r^2/(4t)} Q / sinh^2 r, one analytic step of the descent
//   recursion applied to the m = 3 kernel.
KernelLog unit_h5(double t, double r) {
    KernelLog k;
    const double inv2t = 1.0 / (2.0 * t);
    if (r < 1e-3) {
        double q = 1.0 / 3.0 + inv2t - r * r / 45.0;
        double logQ = 2.0 * std::log(r) + std::log(q);
        double log_sh2 = 2.0 * std::log(r * sinhc(r));
        k.logp = -std::log(2.0 * pi) - 1.5 * std::log(4.0 * pi * t) - 4.0 * t -
                 r * r / (4.0 * t) + logQ - log_sh2;
        k.dl = -r * inv2t - (2.0 * r / 45.0) / q - 2.0 * r / 3.0;
        k.d2l = -inv2t - 2.0 / 3.0 - 2.0 / (45.0 * q);
        return k;
    }
    double coth = 1.0 / std::tanh(r);
    double sh = std::sinh(r);
    double sh2 = sh * sh;
    double Q = r * coth - 1.0 + r * r * inv2t;
    double Qr = coth - r / sh2 + r / t;
    double Qrr = -2.0 / sh2 + 2.0 * r * coth / sh2 + 1.0 / t;
    k.logp = -std::log(2.0 * pi) - 1.5 * std::log(4.0 * pi * t) - 4.0 * t - r * r / (4.0 * t) +
             std::log(Q) - 2.0 * log_sinh(r);
    k.dl = -r * inv2t + Qr / Q - 2.0 * coth;
    k.d2l = -inv2t + Qrr / Q - (Qr / Q) * (Qr / Q) + 2.0 / sh2;
    return k;
}

KernelLog kernel_log(const HeatKernelModel& model, double t, double r) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t > 0 required");
    if (!(r >= 0.0)) throw std::domain_error("heat_kernel: r >= 0 required");
    const ModelManifold& M = model.manifold;
    if (model.form == HeatKernelModel::Form::gaussian) {
        KernelLog k;
        k.logp = -0.5 * M.m * std::log(4.0 * pi * t) - r * r / (4.0 * t);
        k.dl = -r / (2.0 * t);
        k.d2l = -1.0 / (2.0 * t);
        return k;
    }
    const double kap = M.kappa;
    const double sk = M.sqrt_kappa();
    KernelLog u = (M.m == 3) ? unit_h3(kap * t, sk * r) : unit_h5(kap * t, sk * r);
    KernelLog k;
    k.logp = 0.5 * M.m * std::log(kap) + u.logp;
    k.dl = sk * u.dl;
    k.d2l = kap * u.d2l;
    return k;
}

}  // namespace

double heat_kernel(const HeatKernelModel& model, double t, double r) {
    double lp = kernel_log(model, t, r).logp;
    return lp < -700.0 ? 0.0 : std::exp(lp);
}

double heat_kernel_dr(const HeatKernelModel& model, double t, double r) {
    if (r == 0.0) return 0.0;  // even extension
    KernelLog k = kernel_log(model, t, r);
    return (k.logp < -700.0 ? 0.0 : std::exp(k.logp)) * k.dl;
}

double heat_kernel_drr(const HeatKernelModel& model, double t, double r) {
    KernelLog k = kernel_log(model, t, r);
    double p = k.logp < -700.0 ? 0.0 : std::exp(k.logp);
    return p * (k.dl * k.dl + k.d2l);
}

namespace {

double log_envelope(const KernelEnvelope& env, double t, double r) {
    if (!(t > 0.0) || !(r >= 0.0)) throw std::domain_error("envelope_eval: t > 0, r >= 0");
    const ModelManifold& M = env.manifold;
    const double lam1 = M.lambda1();
    switch (env.kind) {
        case KernelEnvelope::Kind::davies: {
            double s = std::min(1.0, std::sqrt(t));
            if (r > 0.0) s = std::min(s, t / r);
            return std::log(env.C) - log_ball_volume(M, s) - lam1 * t - r * r / (4.0 * t);
        }
        case KernelEnvelope::Kind::cartan_hadamard: {
            if (!(env.D > 2.0)) throw std::domain_error("envelope: cartan_hadamard needs D > 2");
            double pre = std::max(0.0, -0.5 * M.m * std::log(t));
            return std::log(env.C) + pre - lam1 * t - r * r / (2.0 * env.D * t);
        }
        case KernelEnvelope::Kind::combined: {
            double pre = std::max(0.0, -0.5 * M.m * std::log(t));
            return std::log(env.C) + pre - lam1 * t - r * r / (4.0 * t);
        }
        case KernelEnvelope::Kind::hyperbolic_sharp: {
            if (!M.is_hyperbolic())
                throw std::domain_error("envelope: hyperbolic_sharp needs a hyperbolic model");
            double sk = M.sqrt_kappa();
            return std::log(env.C) - 0.5 * M.m * std::log(t) +
                   0.5 * (M.m - 3) * std::log1p(r + t) + std::log1p(r) -
                   0.25 * (M.m - 1) * (M.m - 1) * M.kappa * t - r * r / (4.0 * t) -
                   0.5 * (M.m - 1) * sk * r;
        }
        case KernelEnvelope::Kind::ricci_flat: {
            if (M.is_hyperbolic())
                throw std::domain_error("envelope: ricci_flat needs the Euclidean model");
            return std::log(env.C1) - 0.5 * M.m * std::log(t) - env.C2 * r * r / t;
        }
        case KernelEnvelope::Kind::bounded_geometry_grad:
            return std::log(env.C1) - (0.5 * M.m + 0.5) * std::log(t) - env.C2 * r * r / t;
    }
    throw std::invalid_argument("envelope_eval: unknown kind");
}

}  // namespace

double envelope_eval(const KernelEnvelope& env, double t, double r) {
    double lv = log_envelope(env, t, r);
    if (lv > 700.0) throw std::overflow_error("envelope_eval overflow");
    return lv < -700.0 ? 0.0 : std::exp(lv);
}

double kernel_mass(const HeatKernelModel& model, double t, const QuadSpec& spec) {
    if (!(t > 0.0)) throw std::domain_error("kernel_mass: t > 0 required");
    const ModelManifold& M = model.manifold;
    const double drift = (M.m - 1) * M.sqrt_kappa() * t;
    const double R_max = drift + 14.0 * std::sqrt(t) + 5.0;
    const double omega = sphere_area(M.m);
    auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        double lv = kernel_log(model, t, r).logp + log_volume_jacobian(M, r);
        return lv < -700.0 ? 0.0 : omega * std::exp(lv);
    };
    // the integrand peaks near the drift radius with width ~ sqrt(t)
    QuadSpec s = spec;
    double w = std::sqrt(t);
    for (double x : {0.5 * w, 2.0 * w, drift - 14.0 * w, drift, drift + 14.0 * w})
        if (x > 0.0 && x < R_max) s.split_points.push_back(x);
    return integrate_adaptive_1d(f, 0.0, R_max, s).value;
}

double kernel_pde_residual(const HeatKernelModel& model, double t, double r) {
    if (!(t > 0.0) || !(r > 0.0))
        throw std::domain_error("kernel_pde_residual: t > 0 and r > 0 required");
    const ModelManifold& M = model.manifold;
    KernelLog k = kernel_log(model, t, r);
    double p = std::exp(k.logp);
    double radial_coeff;
    if (M.is_hyperbolic()) {
        double sk = M.sqrt_kappa();
        radial_coeff = (M.m - 1) * sk / std::tanh(sk * r);
    } else {
        radial_coeff = (M.m - 1) / r;
    }
    double lap = p * (k.dl * k.dl + k.d2l) + radial_coeff * p * k.dl;
    // d_t p = p d_t(log p); differencing log p stays well conditioned even
    // where the Gaussian factor varies by many e-folds per step
    double h = 7e-4 * t;
    auto lv = [&](double tt) { return kernel_log(model, tt, r).logp; };
    double dlog = (-lv(t + 2 * h) + 8 * lv(t + h) - 8 * lv(t - h) + lv(t - 2 * h)) / (12.0 * h);
    double pt = p * dlog;
    // scale guard: d_t and Lap can both vanish at interior extrema while the
    // natural magnitude of either side stays p * (r^2/4t^2 + 1/t + 1)
    double scale = 0.01 * p * (r * r / (4.0 * t * t) + 1.0 / t + 1.0);
    return std::fabs(pt - lap) / (std::fabs(pt) + std::fabs(lap) + scale);
}

RatioScan envelope_ratio_scan(const HeatKernelModel& model, const KernelEnvelope& env,
                              const std::vector<double>& t_grid,
                              const std::vector<double>& r_grid) {
    if (t_grid.empty() || r_grid.empty())
        throw std::domain_error("envelope_ratio_scan: empty grid");
    RatioScan scan;
    scan.min_ratio = std::numeric_limits<double>::infinity();
    scan.max_ratio = -std::numeric_limits<double>::infinity();
    for (double t : t_grid)
        for (double r : r_grid) {
            double lr = kernel_log(model, t, r).logp - log_envelope(env, t, r);
            double ratio = std::exp(lr);
            scan.table.emplace_back(t, r, ratio);
            scan.min_ratio = std::min(scan.min_ratio, ratio);
            scan.max_ratio = std::max(scan.max_ratio, ratio);
        }
    return scan;
}

}  // namespace morsem
