#include "morsem/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "morsem/errors.hpp"
#include "morsem/parallel.hpp"

namespace morsem {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss (positive half).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    fv[7] = f(c);
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    double kron = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    kron *= h;
    gauss *= h;
    double resabs = 0.0;
    for (int i = 0; i < 15; ++i) resabs += kWgk[std::min(i, 14 - i)] * std::fabs(fv[i]);
    resabs *= std::fabs(h);
    double err = std::fabs(kron - gauss);
    // QUADPACK-style sharpening of the raw difference.
    if (resabs > 0.0 && err > 0.0) {
        double scaled = std::pow(200.0 * err / resabs, 1.5);
        err = resabs * std::min(1.0, scaled);
    }
    return Panel{a, b, kron, err, depth};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                const QuadSpec& spec, double* error_out) {
    std::priority_queue<Panel> heap;
    // start from several panels: a single Kronrod estimate on a wide
    // interval can look converged while hiding sub-resolution structure
    const int initial = 8;
    double total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < initial; ++i) {
        double lo = a + (b - a) * i / initial;
        double hi = a + (b - a) * (i + 1) / initial;
        Panel p = gk15(f, lo, hi, 0);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    const int max_panels = 50000;
    int panels = initial;
    while (true) {
        double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total));
        if (total_err <= tol) break;
        Panel worst = heap.top();
        if (worst.depth >= spec.max_depth || panels >= max_panels) {
            throw QuadratureError("integrate_adaptive_1d: tolerance not reached", total,
                                  total_err);
        }
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid, worst.depth + 1);
        Panel right = gk15(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    if (error_out) *error_out = total_err;
    return total;
}

bool near(double x, double y) {
    return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

// Integrate one panel whose interior is free of declared singular points;
// endpoint singularities are absorbed by the substitution x = x0 +/- s^4.
QuadResult integrate_panel(const std::function<double(double)>& f, double a, double b,
                           bool singular_left, bool singular_right, const QuadSpec& spec) {
    if (singular_left && singular_right) {
        double mid = 0.5 * (a + b);
        QuadResult l = integrate_panel(f, a, mid, true, false, spec);
        QuadResult r = integrate_panel(f, mid, b, false, true, spec);
        return {l.value + r.value, l.error_estimate + r.error_estimate};
    }
    QuadResult out;
    if (singular_left) {
        double smax = std::pow(b - a, 0.25);
        auto g = [&](double s) {
            double s2 = s * s;
            return 4.0 * s * s2 * f(a + s2 * s2);
        };
        out.value = adaptive(g, 0.0, smax, spec, &out.error_estimate);
    } else if (singular_right) {
        double smax = std::pow(b - a, 0.25);
        auto g = [&](double s) {
            double s2 = s * s;
            return 4.0 * s * s2 * f(b - s2 * s2);
        };
        out.value = adaptive(g, 0.0, smax, spec, &out.error_estimate);
    } else {
        out.value = adaptive(f, a, b, spec, &out.error_estimate);
    }
    return out;
}

}  // namespace

QuadResult integrate_adaptive_1d(const std::function<double(double)>& f, double a, double b,
                                 const QuadSpec& spec) {
    if (!(a < b)) throw std::domain_error("integrate_adaptive_1d: requires a < b");
    if (std::isinf(b)) throw std::domain_error("integrate_adaptive_1d: use integrate_to_infinity");

    std::vector<double> cuts{a, b};
    for (double sp : spec.singular_points)
        if (sp > a && sp < b) cuts.push_back(sp);
    for (double sp : spec.split_points)
        if (sp > a && sp < b) cuts.push_back(sp);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto is_declared = [&](double x) {
        for (double sp : spec.singular_points)
            if (near(x, sp)) return true;
        return false;
    };

    QuadSpec panel_spec = spec;
    double scale = static_cast<double>(cuts.size() - 1);
    panel_spec.rel_tol = spec.rel_tol / scale;
    panel_spec.abs_tol = spec.abs_tol / scale;

    QuadResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        QuadResult part = integrate_panel(f, cuts[i], cuts[i + 1], is_declared(cuts[i]),
                                          is_declared(cuts[i + 1]), panel_spec);
        total.value += part.value;
        total.error_estimate += part.error_estimate;
    }
    return total;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double rate,
                                 const QuadSpec& spec) {
    if (!(rate > 0.0)) throw std::domain_error("integrate_to_infinity: decay rate must be > 0");
    auto g = [&](double u) {
        double x = a - std::log1p(-u) / rate;
        return f(x) / (rate * (1.0 - u));
    };
    QuadSpec inner = spec;
    inner.singular_points.clear();
    // 1 - u = e^{-rate(x-a)}; stop where the declared decay puts f below noise.
    double u_hi = 1.0 - 1e-14;
    return integrate_adaptive_1d(g, 0.0, u_hi, inner);
}

double cap_angle(const ModelManifold& M, double d, double r, double R) {
    if (d <= 0.0) return r <= R ? pi : -1.0;
    if (r <= 0.0) return d <= R ? pi : -1.0;
    if (d + r <= R) return pi;
    if (std::fabs(d - r) >= R) return -1.0;
    double cosphi;
    if (!M.is_hyperbolic()) {
        cosphi = (d * d + r * r - R * R) / (2.0 * d * r);
    } else {
        double sk = M.sqrt_kappa();
        double a = sk * d, b = sk * r, c = sk * R;
        // cosh a cosh b = (cosh(a+b)+cosh(a-b))/2, sinh a sinh b = (cosh(a+b)-cosh(a-b))/2
        double cp = std::cosh(a + b), cm = std::cosh(a - b);
        cosphi = (cp + cm - 2.0 * std::cosh(c)) / (cp - cm);
    }
    cosphi = std::clamp(cosphi, -1.0, 1.0);
    return std::acos(cosphi);
}

double integrate_polar_ball(const ModelManifold& M, const RadialProfile& f, double p,
                            const BallSpec& ball, const QuadSpec& spec) {
    if (!(p >= 1.0)) throw std::domain_error("integrate_polar_ball: p must be >= 1");
    const double d = ball.center_offset;
    const double R = ball.radius;
    const double l = f.singularity_exponent;
    if (d <= R && l * p >= M.m)
        throw DivergentIntegralError("integrate_polar_ball: l*p >= m, integral diverges");

    // omega_{m-2}: surface of S^{m-2}; for m = 3 this is the circle, 2 pi.
    const double omega_inner = (M.m == 2) ? 2.0 : sphere_area(M.m - 1);

    auto cap_part = [&](double r) {
        double phi = cap_angle(M, d, r, R);
        if (phi <= 0.0) return 0.0;
        double v = f(r);
        return std::pow(std::fabs(v), p) * volume_jacobian(M, r) * omega_inner *
               cap_weight(M.m, phi);
    };

    double lo = std::max(0.0, d - R);
    double hi = d + R;
    QuadResult total;
    if (d < R) {
        double inner_edge = R - d;
        // Full spheres around the singularity up to R - d.
        auto full_part = [&](double r) {
            double v = f(r);
            return std::pow(std::fabs(v), p) * volume_jacobian(M, r) * sphere_area(M.m);
        };
        QuadSpec s1 = spec;
        s1.singular_points = (l > 0.0) ? std::vector<double>{0.0} : std::vector<double>{};
        QuadResult inner = integrate_adaptive_1d(full_part, 0.0, inner_edge, s1);
        total.value = inner.value;
        total.error_estimate = inner.error_estimate;
        if (hi > inner_edge * (1.0 + 1e-14)) {  // d = 0 leaves no cap range
            QuadSpec s2 = spec;
            s2.singular_points.clear();
            QuadResult outer = integrate_adaptive_1d(cap_part, inner_edge, hi, s2);
            total.value += outer.value;
            total.error_estimate += outer.error_estimate;
        }
    } else {
        QuadSpec s = spec;
        s.singular_points.clear();
        total = integrate_adaptive_1d(cap_part, lo, hi, s);
    }
    return total.value;
}

QuadResult spherical_integral(const ModelManifold& M,
                              const std::function<double(double, double)>& g, double R,
                              const QuadSpec& spec) {
    if (!(R > 0.0)) throw std::domain_error("spherical_integral: R > 0 required");
    const double omega_inner = (M.m == 2) ? 2.0 : sphere_area(M.m - 1);
    QuadSpec inner_spec = spec;
    inner_spec.singular_points.clear();
    inner_spec.rel_tol = 0.25 * spec.rel_tol;
    auto radial = [&](double rho) {
        auto ang = [&](double theta) {
            return g(rho, theta) * std::pow(std::sin(theta), M.m - 2);
        };
        double inner = integrate_adaptive_1d(ang, 0.0, pi, inner_spec).value;
        return inner * volume_jacobian(M, rho);
    };
    QuadResult r = integrate_adaptive_1d(radial, 0.0, R, spec);
    r.value *= omega_inner;
    r.error_estimate *= omega_inner;
    return r;
}

SweepSpec SweepSpec::log_radii(double R_min, double R_max, int R_count, double d_max,
                               int d_count, int refine_rounds) {
    if (!(R_min > 0.0) || R_count < 2 || d_count < 2)
        throw std::domain_error("SweepSpec: R_min > 0 and counts >= 2 required");
    SweepSpec s;
    s.R_grid = log_grid(R_min, R_max, R_count);
    s.d_grid = linear_grid(0.0, d_max, d_count);
    s.refine_rounds = refine_rounds;
    return s;
}

SweepSpec default_sweep() { return SweepSpec::log_radii(1e-2, 50.0, 30, 10.0, 21, 2); }

namespace {

// Golden-section maximization; every evaluation feeds the running max.
void golden_refine(const std::function<double(double)>& g, double lo, double hi,
                   double* best_x, double* best_v) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 24; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = g(x1);
        }
    }
    double x = (f1 > f2) ? x1 : x2;
    double v = std::max(f1, f2);
    if (v > *best_v) {
        *best_v = v;
        *best_x = x;
    }
}

}  // namespace

SupResult sup_sweep(const std::function<double(const BallSpec&)>& objective,
                    const SweepSpec& sweep) {
    if (sweep.R_grid.empty() || sweep.d_grid.empty())
        throw std::domain_error("sup_sweep: empty grid");
    const std::size_t nd = sweep.d_grid.size();
    const std::size_t nR = sweep.R_grid.size();
    std::vector<double> vals(nd * nR);
    parallel_for(nd * nR, [&](std::size_t idx) {
        std::size_t i = idx / nR, j = idx % nR;
        double v = objective(BallSpec(sweep.d_grid[i], sweep.R_grid[j]));
        if (!std::isfinite(v))
            throw std::runtime_error("sup_sweep: non-finite objective at d=" +
                                     std::to_string(sweep.d_grid[i]) +
                                     " R=" + std::to_string(sweep.R_grid[j]));
        vals[idx] = v;
    });
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t j = 0; j < nR; ++j)
            if (vals[i * nR + j] > best) {
                best = vals[i * nR + j];
                bi = i;
                bj = j;
            }
    double d_star = sweep.d_grid[bi];
    double R_star = sweep.R_grid[bj];
    for (int round = 0; round < sweep.refine_rounds; ++round) {
        double dlo = sweep.d_grid[bi > 0 ? bi - 1 : 0];
        double dhi = sweep.d_grid[std::min(bi + 1, nd - 1)];
        if (dhi > dlo) {
            auto g = [&](double d) { return objective(BallSpec(d, R_star)); };
            golden_refine(g, dlo, dhi, &d_star, &best);
        }
        double Llo = std::log(sweep.R_grid[bj > 0 ? bj - 1 : 0]);
        double Lhi = std::log(sweep.R_grid[std::min(bj + 1, nR - 1)]);
        if (Lhi > Llo) {
            auto g = [&](double L) { return objective(BallSpec(d_star, std::exp(L))); };
            double Lbest = std::log(R_star);
            golden_refine(g, Llo, Lhi, &Lbest, &best);
            R_star = std::exp(Lbest);
        }
    }
    return SupResult{best, BallSpec(d_star, std::max(R_star, 1e-300))};
}

namespace {

FitResult least_squares_slope(const std::vector<std::pair<double, double>>& xy) {
    const int n = static_cast<int>(xy.size());
    if (n < 3) throw InsufficientDataError("fit: fewer than 3 usable points in window");
    double sx = 0, sy = 0;
    for (auto& [x, y] : xy) {
        sx += x;
        sy += y;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx <= 0.0) throw InsufficientDataError("fit: degenerate abscissae");
    double slope = sxy / sxx;
    double rss = 0.0;
    for (auto& [x, y] : xy) {
        double e = y - my - slope * (x - mx);
        rss += e * e;
    }
    double se = (n > 2) ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return FitResult{slope, se, n};
}

}  // namespace

FitResult fit_loglog_slope(const std::vector<std::pair<double, double>>& points, double t_min,
                           double t_max) {
    std::vector<std::pair<double, double>> xy;
    for (auto& [t, y] : points)
        if (t > 0.0 && y > 0.0 && t >= t_min && t <= t_max)
            xy.emplace_back(std::log(t), std::log(y));
    return least_squares_slope(xy);
}

FitResult fit_exp_rate(const std::vector<std::pair<double, double>>& points, double t_min,
                       double t_max) {
    std::vector<std::pair<double, double>> xy;
    for (auto& [t, y] : points)
        if (y > 0.0 && t >= t_min && t <= t_max) xy.emplace_back(t, std::log(y));
    FitResult r = least_squares_slope(xy);
    r.slope = -r.slope;  // decay rate reported positive
    return r;
}

}  // namespace morsem
