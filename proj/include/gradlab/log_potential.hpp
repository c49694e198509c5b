#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "gradlab/measure.hpp"

namespace gradlab {

/// Thrown when a potential or gradient is requested at an atom location,
/// where the value is a signed pole rather than a finite number.
struct PoleError : std::runtime_error {
    explicit PoleError(double sign)
        : std::runtime_error(sign > 0 ? "positive logarithmic pole" : "negative logarithmic pole"),
          weight_sign(sign) {}
    double weight_sign;
};

/// I_mu(x) = -(1/2pi) \int log|x-y| dmu(y). Atom terms are closed-form;
/// density cells use midpoint quadrature, with the cell containing x
/// integrated analytically and its 8 neighbors refined 4x.
double eval_potential(const SignedMeasure& mu, Vec2 x);

/// grad I_mu(x) = -(1/2pi) \int (x-y)/|x-y|^2 dmu(y), same quadrature scheme.
Vec2 eval_gradient(const SignedMeasure& mu, Vec2 x);

/// r^{q-2} \int_{D_r(x)} |grad I_mu|^q, q in [1,2), by polar quadrature
/// centered at x. Nodes scale with r, so the value is exactly dilation
/// invariant for atomic mu.
double scaling_functional(const SignedMeasure& mu, Vec2 x, double r, double q);

/// \int_{D_R} exp((4pi - eps)|I_mu| / tv(mu)) dx, eps in (0, 4pi),
/// cell-centered quadrature on D_R with refinement near atoms.
double exp_integrability(const SignedMeasure& mu, double R, double eps, int n = 2048);

/// \int_{D_{1/2}} e^{p|u|} dx, cell-centered midpoint on a 2n x 2n grid
/// over the bounding square of D_{1/2}.
double moser_trudinger_functional(const std::function<double(Vec2)>& u, double p,
                                  int n = 1024);

struct CircleSample {
    Vec2 center;
    double radius = 0.0;
};

struct HarmonicResidualReport {
    double max_deviation = 0.0;
    int circles_tested = 0;
};

/// Computes w = u - I_mu and reports the worst |circle average of w - w(center)|
/// over the given circles. Vanishes (to quadrature error) when w is harmonic.
HarmonicResidualReport harmonic_residual_report(const std::function<double(Vec2)>& u,
                                                const SignedMeasure& mu,
                                                const std::vector<CircleSample>& circles,
                                                int n_theta = 512);

// Exact kernel primitives over rectangles, exposed for the quadrature
// oracle tests.
double log_kernel_rect_integral(Vec2 x, double xmin, double xmax, double ymin, double ymax);
Vec2 grad_kernel_rect_integral(Vec2 x, double xmin, double xmax, double ymin, double ymax);

}  // namespace gradlab
