#include "gradlab/collar.hpp"

#include <cmath>
#include <stdexcept>

namespace gradlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const double kMaxLength = 2.0 * std::asinh(1.0);

// Antiderivative of lambda sec(lambda s): log(sec + tan) = log tan(pi/4 + x/2).
double gudermann_inv(double x) { return std::log(std::tan(0.25 * M_PI + 0.5 * x)); }

}  // namespace

CollarParams collar_from_length(double l) {
    if (!(l > 0.0 && l < kMaxLength))
        throw std::invalid_argument("collar_from_length: need 0 < l < 2 arcsinh 1");
    CollarParams p;
    p.l = l;
    p.w = std::asinh(1.0 / std::sinh(0.5 * l));
    p.lambda = l / kTwoPi;
    p.T = 2.0 * kTwoPi * std::atan(std::exp(p.w)) / l - M_PI * M_PI / l;
    return p;
}

double fermi_to_cylinder(const CollarParams& p, double rho) {
    if (!(std::abs(rho) < p.w))
        throw std::invalid_argument("fermi_to_cylinder: |rho| < w required");
    return 2.0 * kTwoPi * std::atan(std::exp(rho)) / p.l - M_PI * M_PI / p.l;
}

double collar_conformal_factor(const CollarParams& p, double t) {
    if (!(std::abs(t) < p.T))
        throw std::invalid_argument("collar_conformal_factor: |t| < T required");
    return p.lambda / std::cos(p.lambda * t);
}

double collar_distance(const CollarParams& p, double t1, double t2) {
    if (!(t1 >= -p.T && t2 <= p.T && t1 <= t2))
        throw std::invalid_argument("collar_distance: need -T <= t1 <= t2 <= T");
    return gudermann_inv(p.lambda * t2) - gudermann_inv(p.lambda * t1);
}

double injectivity_radius_profile(const CollarParams& p, double t) {
    if (!(t >= 0.0 && t < 2.0 * p.T))
        throw std::invalid_argument("injectivity_radius_profile: t in [0, 2T)");
    const double d = collar_distance(p, p.T - t, p.T);
    return std::asinh(std::cosh(0.5 * p.l) * std::cosh(d) - std::sinh(d));
}

RatioBoundReport ratio_bound_audit(const CollarParams& p,
                                   const std::vector<std::pair<double, double>>& samples) {
    RatioBoundReport rep;
    const double lo = std::exp(-2.0), hi = std::exp(2.0);
    rep.min_ratio = hi;
    rep.max_ratio = lo;
    rep.all_pass = true;
    for (const auto& [t1, t2] : samples) {
        if (!(std::abs(t1) < p.T - 1.0 && std::abs(t2) < p.T - 1.0 && std::abs(t2 - t1) < 2.0)) {
            ++rep.flagged;
            continue;
        }
        const double ratio = std::cos(p.lambda * t2) / std::cos(p.lambda * t1);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (!(ratio > lo && ratio < hi)) rep.all_pass = false;
        ++rep.evaluated;
    }
    if (rep.evaluated == 0) {
        rep.min_ratio = rep.max_ratio = 1.0;
    }
    return rep;
}

double hyperbolic_ball_area(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("hyperbolic_ball_area: r >= 0");
    return kTwoPi * (std::cosh(r) - 1.0);
}

double disk_chart_factor(double r, Vec2 x) {
    const double s = std::sinh(0.5 * r);
    const double denom = 1.0 - s * s * norm2(x);
    if (!(denom > 0.0)) throw std::invalid_argument("disk_chart_factor: point outside chart");
    return 2.0 * s / denom;
}

long covering_count_bound(const TopologyData& topo, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("covering_count_bound: a > 0 required");
    if (topo.genus < 2) throw std::invalid_argument("covering_count_bound: genus >= 2 required");
    return static_cast<long>(std::ceil(topo.area() / hyperbolic_ball_area(a / 10.0)));
}

StripGradientReport collar_strip_gradient_audit(
    const CollarParams& p, const std::function<Vec2(double, double)>& grad_u, int k, int m,
    int nt_per_unit, int n_theta) {
    if (!(-p.T + 2.0 < k && k < m && m < p.T - 2.0))
        throw std::invalid_argument("collar_strip_gradient_audit: need -T+2 < k < m < T-2");
    StripGradientReport rep;
    const int nt = (m - k) * nt_per_unit;
    const double dt = double(m - k) / nt;
    const double dth = kTwoPi / n_theta;
    for (int i = 0; i < nt; ++i) {
        const double t = k + (i + 0.5) * dt;
        const double conf = p.lambda / std::cos(p.lambda * t);
        double ring = 0.0;
        for (int j = 0; j < n_theta; ++j) ring += norm(grad_u(t, (j + 0.5) * dth));
        rep.integral += ring * conf * dt * dth;
    }
    rep.distance = collar_distance(p, k, m);
    rep.ratio = rep.integral / rep.distance;
    for (int i = std::max(k, 0) + 1; i + 1 <= m; ++i) {
        if (i - 1 < 0) continue;
        const double left = collar_distance(p, i - 1, i);
        const double right = collar_distance(p, i, i + 1);
        if (right < left - 1e-12) rep.lengths_monotone = false;
    }
    return rep;
}

namespace {

// Dirichlet Green function of -d^2/dt^2 + n^2 on [-L, L], exponent-scaled
// so that nothing overflows for large n L.
double green_mode(int n, double L, double t, double s) {
    const double tl = std::min(t, s), tg = std::max(t, s);
    if (n == 0) return (L + tl) * (L - tg) / (2.0 * L);
    const double x1 = n * (L + tl), x2 = n * (L - tg);
    const double delta = tg - tl;
    const double D = 1.0 - std::exp(-4.0 * n * L);
    return (1.0 - std::exp(-2.0 * x1)) * (1.0 - std::exp(-2.0 * x2)) *
           std::exp(-n * delta) / (2.0 * n * D);
}

double green_mode_dt(int n, double L, double t, double s) {
    if (n == 0) return t < s ? (L - s) / (2.0 * L) : -(L + s) / (2.0 * L);
    const double D = 1.0 - std::exp(-4.0 * n * L);
    if (t < s) {
        const double x1 = n * (L + t), x2 = n * (L - s);
        return std::exp(-n * (s - t)) * (1.0 - std::exp(-2.0 * x2)) *
               (1.0 + std::exp(-2.0 * x1)) / (2.0 * D);
    }
    const double x1 = n * (L + s), x2 = n * (L - t);
    return -std::exp(-n * (t - s)) * (1.0 - std::exp(-2.0 * x1)) *
           (1.0 + std::exp(-2.0 * x2)) / (2.0 * D);
}

}  // namespace

CylinderPotential::CylinderPotential(const CollarParams& p, double t0, double theta0,
                                     double sigma, int modes)
    : L_(p.T - 1.0), t0_(t0), theta0_(theta0), sigma_(sigma), modes_(modes) {
    if (!(std::abs(t0) < L_))
        throw std::invalid_argument("CylinderPotential: source outside the cylinder");
    if (!(sigma > 0.0)) throw std::invalid_argument("CylinderPotential: sigma > 0");
}

double CylinderPotential::value(double t, double theta) const {
    double acc = green_mode(0, L_, t, t0_);
    for (int n = 1; n <= modes_; ++n) {
        const double damp = std::exp(-0.5 * n * n * sigma_ * sigma_);
        if (damp < 1e-14) break;
        acc += 2.0 * damp * green_mode(n, L_, t, t0_) * std::cos(n * (theta - theta0_));
    }
    return acc / kTwoPi;
}

Vec2 CylinderPotential::gradient(double t, double theta) const {
    double dt = green_mode_dt(0, L_, t, t0_);
    double dth = 0.0;
    for (int n = 1; n <= modes_; ++n) {
        const double damp = std::exp(-0.5 * n * n * sigma_ * sigma_);
        if (damp < 1e-14) break;
        const double phase = n * (theta - theta0_);
        dt += 2.0 * damp * green_mode_dt(n, L_, t, t0_) * std::cos(phase);
        dth -= 2.0 * damp * n * green_mode(n, L_, t, t0_) * std::sin(phase);
    }
    return {dt / kTwoPi, dth / kTwoPi};
}

double annulus_estimate_audit(double a, double p, double per_disk_bound) {
    if (p >= 2.0) throw std::invalid_argument("annulus_estimate_audit: series diverges for p >= 2");
    if (!(p >= 1.0)) throw std::invalid_argument("annulus_estimate_audit: p >= 1 required");
    if (!(a >= 0.0 && a <= 0.25))
        throw std::invalid_argument("annulus_estimate_audit: a in [0, 1/4] required");
    const double q = std::pow(2.0, -(2.0 - p));
    if (a == 0.0) return per_disk_bound * q / (1.0 - q);
    const double md = -std::log2(a);
    const int m = static_cast<int>(std::lround(md));
    if (std::abs(md - m) > 1e-12)
        throw std::invalid_argument("annulus_estimate_audit: a must be a power of two");
    return per_disk_bound * q * (1.0 - std::pow(q, m)) / (1.0 - q);
}

}  // namespace gradlab
