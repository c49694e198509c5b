#pragma once

#include <functional>
#include <vector>

#include "gradlab/geometry.hpp"

namespace gradlab {

/// Collar of a short closed geodesic of length l (curvature -1 units):
/// cylinder (-T, T) x S^1 with conformal factor lambda / cos(lambda t).
struct CollarParams {
    double l = 0.0;       // geodesic length, 0 < l < 2 arcsinh 1
    double w = 0.0;       // Fermi half-width, arcsinh(1 / sinh(l/2))
    double T = 0.0;       // cylinder half-length
    double lambda = 0.0;  // l / (2 pi)
};

CollarParams collar_from_length(double l);

/// t(rho) = 4 pi arctan(e^rho)/l - pi^2/l, a strictly increasing bijection
/// (-w, w) -> (-T, T) with cosh(rho) cos(lambda t(rho)) = 1.
double fermi_to_cylinder(const CollarParams& p, double rho);

/// lambda / cos(lambda t), |t| < T.
double collar_conformal_factor(const CollarParams& p, double t);

/// d(t1, t2) = integral of lambda sec(lambda s) over [t1, t2], via the
/// exact antiderivative log(sec + tan).
double collar_distance(const CollarParams& p, double t1, double t2);

/// Injectivity radius at cylinder coordinate T - t (t in [0, 2T)):
/// sinh r = cosh(l/2) cosh d(t) - sinh d(t) with d(t) = d(T - t, T).
double injectivity_radius_profile(const CollarParams& p, double t);

struct RatioBoundReport {
    int evaluated = 0;
    int flagged = 0;  // precondition-violating samples, not evaluated
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    bool all_pass = false;  // every evaluated ratio inside (e^-2, e^2)
};

/// Checks e^-2 < cos(lambda t2)/cos(lambda t1) < e^2 for samples with
/// |t1|, |t2| < T - 1 and |t2 - t1| < 2.
RatioBoundReport ratio_bound_audit(const CollarParams& p,
                                   const std::vector<std::pair<double, double>>& samples);

/// 2 pi (cosh r - 1).
double hyperbolic_ball_area(double r);

/// Conformal factor of the disk chart metric g_r:
/// 2 sinh(r/2) / (1 - sinh^2(r/2) |x|^2).
double disk_chart_factor(double r, Vec2 x);

struct TopologyData {
    int genus = 2;
    int chi() const { return 2 - 2 * genus; }
    double area() const { return 2.0 * M_PI * std::abs(chi()); }
};

/// ceil(Area(Sigma) / Area of hyperbolic ball of radius a/10) — Vitali
/// covering count bound.
long covering_count_bound(const TopologyData& topo, double a);

struct StripGradientReport {
    double integral = 0.0;       // \int |grad u| (lambda / cos lambda t) dt dtheta
    double distance = 0.0;       // d_{k,m}
    double ratio = 0.0;          // integral / distance
    bool lengths_monotone = true;  // per-strip lengths nondecreasing on t >= 0
};

/// Euclidean-gradient field on the cylinder, weighted by the conformal
/// factor and compared against the inter-circle distance d_{k,m}.
StripGradientReport collar_strip_gradient_audit(
    const CollarParams& p, const std::function<Vec2(double t, double theta)>& grad_u, int k,
    int m, int nt_per_unit = 64, int n_theta = 128);

/// Potential of a unit point mass at (t0, theta0) on the finite cylinder
/// [-(T-1), T-1] x S^1 with Dirichlet ends, Gaussian-mollified in theta.
/// Provides u and its Euclidean gradient via a theta-Fourier expansion.
class CylinderPotential {
public:
    CylinderPotential(const CollarParams& p, double t0, double theta0, double sigma = 0.05,
                      int modes = 192);
    double value(double t, double theta) const;
    Vec2 gradient(double t, double theta) const;
    double half_length() const { return L_; }

private:
    double L_, t0_, theta0_, sigma_;
    int modes_;
};

/// per_disk_bound * sum_{i=1}^{m} (2^{-i})^{2-p}, the dyadic annulus
/// assembly bound; a = 2^{-m} or a = 0 (infinite series). p < 2 required.
double annulus_estimate_audit(double a, double p, double per_disk_bound);

}  // namespace gradlab
