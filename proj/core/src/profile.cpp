#include "morsem/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace morsem {

RadialProfile power_exp_profile(double l, double k, bool gaussian) {
    if (l < 0.0) throw std::domain_error("power_exp_profile: l >= 0 required");
    if (k < 0.0) throw std::domain_error("power_exp_profile: k >= 0 required");
    RadialProfile p;
    p.singularity_exponent = l;
    p.decay = gaussian ? Decay::exp_square(k) : (k > 0.0 ? Decay::exponential(k) : Decay::power(l));
    p.eval = [l, k, gaussian](double r) {
        if (r <= 0.0) return l > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
        double e = gaussian ? -k * r * r : -k * r;
        return std::pow(r, -l) * std::exp(e);
    };
    return p;
}

RadialProfile power_profile(double eta) {
    if (eta < 0.0) throw std::domain_error("power_profile: eta >= 0 required");
    RadialProfile p;
    p.singularity_exponent = eta;
    p.decay = Decay::power(eta);
    p.eval = [eta](double r) {
        if (r <= 0.0) return eta > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
        return std::pow(r, -eta);
    };
    return p;
}

RadialProfile plateau_profile(double h, double radius, double shoulder) {
    if (!(radius > 0.0) || !(h >= 0.0)) throw std::domain_error("plateau_profile: bad parameters");
    double w = std::max(shoulder, 1e-3) * radius;
    RadialProfile p;
    p.singularity_exponent = 0.0;
    p.decay = Decay::compact(radius + w);
    p.eval = [h, radius, w](double r) {
        if (r <= radius) return h;
        if (r >= radius + w) return 0.0;
        double s = (r - radius) / w;  // smoothstep shoulder
        return h * (1.0 - s * s * (3.0 - 2.0 * s));
    };
    return p;
}

SampledRadialProfile::SampledRadialProfile(std::vector<double> grid, std::vector<double> values,
                                           double singularity_exponent, Decay tail_hint)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      sing_exp_(singularity_exponent),
      hint_(tail_hint) {
    if (grid_.size() != values_.size() || grid_.size() < 4)
        throw std::domain_error("SampledRadialProfile: need >= 4 matching samples");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw std::domain_error("SampledRadialProfile: grid must be strictly increasing");

    // Catmull-Rom style slopes for cubic Hermite interpolation.
    const std::size_t n = grid_.size();
    slopes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = (i == 0) ? 0 : i - 1;
        std::size_t b = (i + 1 == n) ? n - 1 : i + 1;
        slopes_[i] = (values_[b] - values_[a]) / (grid_[b] - grid_[a]);
    }

    // Tail model fitted from the last decade of samples: log|f| against
    // {1, r, r^2, log r} restricted by the declared decay type.
    std::size_t last = n - 1;
    while (last > 0 && values_[last] == 0.0) --last;
    double rN = grid_[last];
    double vN = values_[last];
    tail_sign_ = (vN < 0.0) ? -1.0 : 1.0;
    if (vN == 0.0) {
        tail_amp_ = 0.0;
        return;
    }
    std::size_t prev = last;
    while (prev > 0 && grid_[prev] > 0.6 * rN) --prev;
    double rP = grid_[prev];
    double vP = values_[prev];
    bool usable = (vP * vN > 0.0) && rP > 0.0 && rP < rN;
    double la = std::log(std::fabs(vN));
    double lp = usable ? std::log(std::fabs(vP)) : la;
    switch (hint_.type) {
        case Decay::Type::power: {
            double e = usable ? (lp - la) / std::log(rN / rP) : hint_.eta;
            tail_e_ = std::max(0.0, e);
            tail_amp_ = std::fabs(vN) * std::pow(rN, tail_e_);
            break;
        }
        case Decay::Type::exp_square: {
            double b = usable ? (lp - la) / (rN * rN - rP * rP) : hint_.rate;
            tail_b_ = std::max(0.0, b);
            tail_amp_ = std::fabs(vN) * std::exp(tail_b_ * rN * rN);
            break;
        }
        case Decay::Type::compact:
            tail_amp_ = 0.0;
            break;
        case Decay::Type::exponential:
        default: {
            double a = usable ? (lp - la) / (rN - rP) : hint_.rate;
            tail_a_ = std::max(0.0, a);
            tail_amp_ = std::fabs(vN) * std::exp(tail_a_ * rN);
            break;
        }
    }
}

double SampledRadialProfile::tail(double r) const {
    if (tail_amp_ == 0.0) return 0.0;
    double lv = std::log(tail_amp_) - tail_a_ * r - tail_b_ * r * r -
                (tail_e_ > 0.0 ? tail_e_ * std::log(r) : 0.0);
    if (lv < -700.0) return 0.0;
    return tail_sign_ * std::exp(lv);
}

double SampledRadialProfile::operator()(double r) const {
    if (r >= grid_.back()) return tail(r);
    if (r <= grid_.front()) {
        double v0 = values_.front();
        double r0 = grid_.front();
        if (r0 <= 0.0 || sing_exp_ <= 0.0 || r <= 0.0) return v0;
        return v0 * std::pow(r / r0, -sing_exp_);
    }
    auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    double h = grid_[i + 1] - grid_[i];
    double t = (r - grid_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] +
           h11 * h * slopes_[i + 1];
}

double SampledRadialProfile::derivative(double r) const {
    if (r >= grid_.back()) {
        if (tail_amp_ == 0.0) return 0.0;
        double v = tail(r);
        return v * (-tail_a_ - 2.0 * tail_b_ * r - (tail_e_ > 0.0 ? tail_e_ / r : 0.0));
    }
    if (r <= grid_.front()) {
        double r0 = grid_.front();
        if (r0 <= 0.0 || sing_exp_ <= 0.0 || r <= 0.0) return slopes_.front();
        return values_.front() * (-sing_exp_ / r0) * std::pow(r / r0, -sing_exp_ - 1.0);
    }
    auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    double h = grid_[i + 1] - grid_[i];
    double t = (r - grid_[i]) / h;
    double t2 = t * t;
    double dh00 = (6 * t2 - 6 * t) / h, dh10 = 3 * t2 - 4 * t + 1;
    double dh01 = (-6 * t2 + 6 * t) / h, dh11 = 3 * t2 - 2 * t;
    return dh00 * values_[i] + dh10 * slopes_[i] + dh01 * values_[i + 1] + dh11 * slopes_[i + 1];
}

RadialProfile SampledRadialProfile::as_profile() const {
    RadialProfile p;
    auto self = *this;  // value capture keeps the samples alive
    p.eval = [self](double r) { return self(r); };
    p.singularity_exponent = sing_exp_;
    p.decay = hint_;
    return p;
}

}  // namespace morsem
