#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "morsem/semigroup.hpp"

namespace morsem {

/// Abstract quadratic fixed-point setup: u = u1 + N(u, u) + T u with
/// ||T u|| <= C1 ||u||, ||N(u, v)|| <= C2 ||u|| ||v|| and seed norm eps.
/// Convergence is guaranteed when eps < (1 - C1)^2 / (4 C2), with the
/// solution confined to the ball of radius 2 eps / (1 - C1).
struct FixedPointProblem {
    double linC = 0.0;    // C1 in [0, 1)
    double bilinC = 1.0;  // C2 > 0
    double epsilon = 0.0;

    FixedPointProblem(double C1, double C2, double eps)
        : linC(C1), bilinC(C2), epsilon(eps) {
        if (!(C1 >= 0.0 && C1 < 1.0)) throw std::domain_error("FixedPointProblem: 0 <= C1 < 1");
        if (!(C2 > 0.0)) throw std::domain_error("FixedPointProblem: C2 > 0");
        if (!(eps >= 0.0)) throw std::domain_error("FixedPointProblem: eps >= 0");
    }
    double threshold() const { return (1.0 - linC) * (1.0 - linC) / (4.0 * bilinC); }
    bool smallness() const { return epsilon < threshold(); }
    double ball_radius() const { return 2.0 * epsilon / (1.0 - linC); }
};

using Vec = std::vector<double>;

struct FixedPointResult {
    Vec solution;
    std::vector<double> iterate_norms;
    std::vector<double> diff_norms;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    bool ball_respected = true;  // iterate norms stayed within 2 eps/(1-C1)+tol
};

/// u_{n+1} = u1 + N(u_n, u_n) + T(u_n) until the successive difference norm
/// drops below tol. Non-convergence and norm blow-up are reported, not
/// thrown.
FixedPointResult fixed_point_iterate(const FixedPointProblem& problem, const Vec& seed,
                                     const std::function<Vec(const Vec&, const Vec&)>& N_map,
                                     const std::function<Vec(const Vec&)>& T_map,
                                     const std::function<double(const Vec&)>& norm, double tol,
                                     int max_iter);

/// Time-weighted solution space: the Morrey-in-space norm sup plus the
/// weighted sup [d(t)^{m/2} t^{-lambda/2}]^{(1/p - 1/q)} e^{beta t}
/// ||u(t)||_{q,lambda}; optional gradient component with its own exponent s
/// and rate rho.
struct KatoSpaceSpec {
    double p = 2.0;
    double q = 4.0;
    double lambda = 1.0;
    MorreyVariant variant = MorreyVariant::g;
    double beta = 0.0;
    double horizon = 8.0;  // node range; the global flag only switches defaults
    bool global_flag = false;

    struct GradComponent {
        double s = 4.0;
        double rho = 0.0;
    };
    std::optional<GradComponent> grad{};

    void validate(int m) const {
        if (!(m - lambda <= p && p <= q))
            throw std::domain_error("KatoSpaceSpec: m - lambda <= p <= q required");
        if (!(beta >= 0.0)) throw std::domain_error("KatoSpaceSpec: beta >= 0");
    }
};

/// [d(t)^{m/2} t^{-lambda/2}]^{(1/p - 1/q)} e^{beta t}.
double kato_x_weight(const KatoSpaceSpec& spec, int m, double t);
/// [d(t)]^{1/2 + (m/2)(1/p - 1/s)} t^{-(lambda/2)(1/p - 1/s)} e^{rho t}.
double kato_grad_weight(const KatoSpaceSpec& spec, int m, double t);

/// Time-indexed radial snapshots: times graded toward 0 (uniform in
/// sqrt(t)), radii graded toward 0.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> radii;
    std::vector<std::vector<double>> values;  // values[i][j] = u(times[i], radii[j])

    static Trajectory zeros(const std::vector<double>& times, const std::vector<double>& radii);
    Trajectory& axpy(double a, const Trajectory& other);  // this += a * other
    double max_abs() const;
};

struct MildProblem {
    enum class Nonlinearity { none, burgers_div };

    ModelManifold manifold;
    double nu = 1.0;
    double c_eff = 0.0;  // Einstein zeroth-order damping; 2*c0 by convention
    RadialProfile initial;
    Nonlinearity nonlinearity = Nonlinearity::burgers_div;
};

struct MildGrids {
    int time_nodes = 40;
    double horizon = 8.0;
    int radial_nodes = 200;
    double r_max = 30.0;

    std::vector<double> times() const;
    std::vector<double> radii() const;
};

struct KatoNorm {
    double cm = 0.0;
    double x = 0.0;
    double grad = 0.0;
    double total = 0.0;
};

/// Kato norm of a trajectory: CM = max_i ||u(t_i)||_{p,lambda}, X = max_i
/// x_weight(t_i) ||u(t_i)||_{q,lambda}; computed with the shared fixed-grid
/// ball integrator so per-ball inequalities transfer exactly.
KatoNorm kato_norm(const Trajectory& traj, const KatoSpaceSpec& spec, const ModelManifold& M,
                   const SweepSpec& sweep);

/// One application of the mild right-hand side:
/// t -> e^{t(nu Lap - c_eff)} u0 - int_0^t e^{(t-tau)(nu Lap - c_eff)}
/// N(u(tau)) dtau with N(u) = (1/2) d_d(u^2) realized by evolving u^2 and
/// differentiating the kernel. The time integral runs on a graded mesh with
/// tau = t - s^2 panels aligned to trajectory nodes.
Trajectory duhamel_apply(const MildProblem& problem, const Trajectory& traj,
                         const MildGrids& grids, const QuadSpec& spec);

struct MildReport {
    std::vector<double> iterate_norms;
    std::vector<double> diff_norms;
    std::vector<double> contraction_ratios;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    double seed_norm = 0.0;       // measured Kato norm of the linear seed
    double data_norm = 0.0;       // Morrey norm estimate of the data
    double c_tilde = 0.0;         // seed_norm / data_norm
    double bilinear_C2 = 0.0;     // measured from the first Picard step
    double threshold = 0.0;       // 1/(4 C2) with C1 = 0
    double residual = 0.0;        // refined-quadrature mild residual (relative)
    double solution_norm = 0.0;   // Kato norm of the fixed point
    bool ball_check = false;      // solution_norm <= 2 * c_tilde * data_norm
    double seed_limsup = 0.0;     // X-component over the earliest nodes
};

struct MildSolution {
    Trajectory trajectory;
    MildReport report;
};

MildSolution solve_mild(const MildProblem& problem, const KatoSpaceSpec& kspec, double tol,
                        int max_iter, const MildGrids& grids, const SweepSpec& sweep,
                        const QuadSpec& quad);

/// Kato-weighted relative residual of u against the refined-quadrature
/// right-hand side, evaluated at the check times (all nodes when empty).
double residual_mild(const MildProblem& problem, const Trajectory& traj,
                     const KatoSpaceSpec& kspec, const MildGrids& grids, const SweepSpec& sweep,
                     const QuadSpec& quad, const std::vector<double>& check_times = {});

struct ScalingCheck {
    double max_deviation = 0.0;
};

/// Solves with data u0 and a u0(a .) on matched grids and compares
/// u_a(t, d) with a u(a^2 t, a d); Euclidean Burgers surrogate only.
ScalingCheck scaling_check_euclidean(const MildProblem& problem, double a,
                                     const KatoSpaceSpec& kspec, double tol, int max_iter,
                                     const MildGrids& grids, const SweepSpec& sweep,
                                     const QuadSpec& quad);

}  // namespace morsem
