#include "gradlab/log_potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gradlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Primitive of log|z| over [0,X]x[0,Y], X,Y >= 0, vanishing on the axes.
double log_primitive(double X, double Y) {
    if (X <= 0.0 || Y <= 0.0) return 0.0;
    const double R2 = X * X + Y * Y;
    return X * Y * (0.5 * std::log(R2) - 1.5) + 0.5 * X * X * std::atan2(Y, X) +
           0.5 * Y * Y * std::atan2(X, Y);
}

// Signed extension: log|z| is even in each coordinate.
double log_primitive_signed(double X, double Y) {
    const double s = (X < 0 ? -1.0 : 1.0) * (Y < 0 ? -1.0 : 1.0);
    return s * log_primitive(std::abs(X), std::abs(Y));
}

// Integral of z1/(z1^2+z2^2) over [0,A]x[0,B], A,B >= 0.
double gradx_quadrant(double A, double B) {
    if (A <= 0.0 || B <= 0.0) return 0.0;
    return 0.5 * B * std::log(A * A + B * B) - B * std::log(B) + A * std::atan2(B, A);
}

// Cumulative primitive: even in X (integrand odd in z1), odd in Y.
double gradx_primitive_signed(double X, double Y) {
    const double s = (Y < 0 ? -1.0 : 1.0);
    return s * gradx_quadrant(std::abs(X), std::abs(Y));
}

struct AtomGuard {
    static void check(const SignedMeasure& mu, Vec2 x) {
        for (const auto& a : mu.atoms())
            if (norm2(x - a.pos) < 1e-28) throw PoleError(a.weight > 0 ? 1.0 : -1.0);
    }
};

double atomic_potential(const SignedMeasure& mu, Vec2 x) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.weight * std::log(dist(x, a.pos));
    return -s / kTwoPi;
}

Vec2 atomic_gradient(const SignedMeasure& mu, Vec2 x) {
    Vec2 g;
    for (const auto& a : mu.atoms()) {
        const Vec2 d = x - a.pos;
        const double r2 = norm2(d);
        g = g + (a.weight / r2) * d;
    }
    return (-1.0 / kTwoPi) * g;
}

// 8-point Gauss-Legendre on [0,1].
constexpr std::array<double, 8> kGlNodes = {
    0.01985507175123188415821957, 0.10166676129318663020422303,
    0.23723379504183550709113047, 0.40828267875217509753026193,
    0.59171732124782490246973807, 0.76276620495816449290886953,
    0.89833323870681336979577697, 0.98014492824876811584178043};
constexpr std::array<double, 8> kGlWeights = {
    0.05061426814518812957626567, 0.11119051722668723527217800,
    0.15685332293894364366898110, 0.18134189168918099148257522,
    0.18134189168918099148257522, 0.15685332293894364366898110,
    0.11119051722668723527217800, 0.05061426814518812957626567};

}  // namespace

double log_kernel_rect_integral(Vec2 x, double xmin, double xmax, double ymin, double ymax) {
    const double X1 = xmin - x.x, X2 = xmax - x.x;
    const double Y1 = ymin - x.y, Y2 = ymax - x.y;
    return log_primitive_signed(X2, Y2) - log_primitive_signed(X1, Y2) -
           log_primitive_signed(X2, Y1) + log_primitive_signed(X1, Y1);
}

Vec2 grad_kernel_rect_integral(Vec2 x, double xmin, double xmax, double ymin, double ymax) {
    // \int_rect (z1, z2)/|z|^2 dz with z = y - x.
    const double X1 = xmin - x.x, X2 = xmax - x.x;
    const double Y1 = ymin - x.y, Y2 = ymax - x.y;
    const double gx = gradx_primitive_signed(X2, Y2) - gradx_primitive_signed(X1, Y2) -
                      gradx_primitive_signed(X2, Y1) + gradx_primitive_signed(X1, Y1);
    // y-component by the coordinate swap symmetry.
    const double gy = gradx_primitive_signed(Y2, X2) - gradx_primitive_signed(Y1, X2) -
                      gradx_primitive_signed(Y2, X1) + gradx_primitive_signed(Y1, X1);
    return {gx, gy};
}

namespace {

// Shared density-cell walk: exact log/grad kernel integral on the cell
// containing x, 4x refined midpoint on the 8 neighbors, midpoint elsewhere.
template <typename CellExact, typename PointKernel>
void density_quadrature(const DensityGrid& d, Vec2 x, CellExact exact, PointKernel kern) {
    const double h = d.cell;
    const int cx = static_cast<int>(std::floor((x.x - d.origin.x) / h));
    const int cy = static_cast<int>(std::floor((x.y - d.origin.y) / h));
    for (int iy = 0; iy < d.ny; ++iy) {
        for (int ix = 0; ix < d.nx; ++ix) {
            const double f = d.at(ix, iy);
            if (f == 0.0) continue;
            const double x0 = d.origin.x + ix * h, y0 = d.origin.y + iy * h;
            if (ix == cx && iy == cy) {
                exact(f, x0, x0 + h, y0, y0 + h);
            } else if (std::abs(ix - cx) <= 1 && std::abs(iy - cy) <= 1) {
                const double hh = h / 4.0, w = hh * hh;
                for (int sy = 0; sy < 4; ++sy)
                    for (int sx = 0; sx < 4; ++sx)
                        kern(f * w, Vec2{x0 + (sx + 0.5) * hh, y0 + (sy + 0.5) * hh});
            } else {
                kern(f * h * h, Vec2{x0 + 0.5 * h, y0 + 0.5 * h});
            }
        }
    }
}

}  // namespace

double eval_potential(const SignedMeasure& mu, Vec2 x) {
    AtomGuard::check(mu, x);
    double value = atomic_potential(mu, x);
    if (mu.density()) {
        double acc = 0.0;
        density_quadrature(
            *mu.density(), x,
            [&](double f, double a, double b, double c, double e) {
                acc += f * log_kernel_rect_integral(x, a, b, c, e);
            },
            [&](double mass, Vec2 y) { acc += mass * std::log(dist(x, y)); });
        value += -acc / kTwoPi;
    }
    return value;
}

Vec2 eval_gradient(const SignedMeasure& mu, Vec2 x) {
    AtomGuard::check(mu, x);
    Vec2 g = atomic_gradient(mu, x);
    if (mu.density()) {
        Vec2 acc;
        density_quadrature(
            *mu.density(), x,
            [&](double f, double a, double b, double c, double e) {
                // Exact \int (x - y)/|x - y|^2 f dy = -f \int z/|z|^2 dz.
                acc = acc - f * grad_kernel_rect_integral(x, a, b, c, e);
            },
            [&](double mass, Vec2 y) {
                const Vec2 dxy = x - y;
                acc = acc + (mass / norm2(dxy)) * dxy;
            });
        g = g + (-1.0 / kTwoPi) * acc;
    }
    return g;
}

double scaling_functional(const SignedMeasure& mu, Vec2 x, double r, double q) {
    if (!(r > 0.0)) throw std::invalid_argument("scaling_functional: r must be positive");
    if (!(q >= 1.0 && q < 2.0)) throw std::invalid_argument("scaling_functional: q in [1,2)");

    // Radial breakpoints: geometric refinement toward the center plus the
    // radii of interior atoms (integrable kinks of the integrand).
    std::vector<double> breaks;
    const double s_min = r * 1e-12;
    const int per_decade = 6;
    for (int k = 0;; ++k) {
        const double s = s_min * std::pow(10.0, static_cast<double>(k) / per_decade);
        if (s >= r) break;
        breaks.push_back(s);
    }
    breaks.push_back(r);
    for (const auto& a : mu.atoms()) {
        const double sa = dist(a.pos, x);
        if (sa > s_min && sa < r) {
            breaks.push_back(sa * (1.0 - 1e-6));
            breaks.push_back(sa * (1.0 + 1e-6));
        }
    }
    std::sort(breaks.begin(), breaks.end());

    const int n_theta = 256;
    const double dtheta = kTwoPi / n_theta;
    std::vector<Vec2> dirs(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        const double th = (i + 0.5) * dtheta;
        dirs[i] = {std::cos(th), std::sin(th)};
    }

    double integral = 0.0;
    double lo = 0.0;
    for (double hi : breaks) {
        const double len = hi - lo;
        if (len <= 0.0) {
            lo = hi;
            continue;
        }
        for (int g = 0; g < 8; ++g) {
            const double s = lo + kGlNodes[g] * len;
            if (s <= s_min) continue;
            double ring = 0.0;
            for (const auto& dir : dirs) {
                const Vec2 p = x + s * dir;
                ring += std::pow(norm(eval_gradient(mu, p)), q);
            }
            integral += ring * dtheta * s * kGlWeights[g] * len;
        }
        lo = hi;
    }

    // Analytic core for an atom sitting exactly at the center.
    for (const auto& a : mu.atoms()) {
        if (norm2(a.pos - x) < 1e-28) {
            const double c = std::abs(a.weight) / kTwoPi;
            integral += kTwoPi * std::pow(c, q) * std::pow(s_min, 2.0 - q) / (2.0 - q);
        }
    }
    return std::pow(r, q - 2.0) * integral;
}

double exp_integrability(const SignedMeasure& mu, double R, double eps, int n) {
    if (!(eps > 0.0 && eps < 4.0 * M_PI))
        throw std::invalid_argument("exp_integrability: eps must lie in (0, 4pi)");
    const double tv = total_variation(mu);
    if (!(tv > 0.0)) throw std::invalid_argument("exp_integrability: measure has zero mass");
    const double c = (4.0 * M_PI - eps) / tv;

    const double h = 2.0 * R / n;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 p{-R + (ix + 0.5) * h, -R + (iy + 0.5) * h};
            if (norm(p) > R) continue;
            bool near_atom = false;
            for (const auto& a : mu.atoms())
                if (dist(p, a.pos) < 3.0 * h) {
                    near_atom = true;
                    break;
                }
            if (!near_atom) {
                acc += std::exp(c * std::abs(eval_potential(mu, p))) * h * h;
            } else {
                const int m = 8;
                const double hh = h / m, w = hh * hh;
                for (int sy = 0; sy < m; ++sy)
                    for (int sx = 0; sx < m; ++sx) {
                        const Vec2 pp{p.x - 0.5 * h + (sx + 0.5) * hh,
                                      p.y - 0.5 * h + (sy + 0.5) * hh};
                        acc += std::exp(c * std::abs(eval_potential(mu, pp))) * w;
                    }
            }
        }
    }
    return acc;
}

double moser_trudinger_functional(const std::function<double(Vec2)>& u, double p, int n) {
    if (!(p > 0.0)) throw std::invalid_argument("moser_trudinger_functional: p > 0 required");
    const int m = 2 * n;
    const double h = 1.0 / m;
    double acc = 0.0;
    for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
            const Vec2 c{-0.5 + (ix + 0.5) * h, -0.5 + (iy + 0.5) * h};
            if (norm(c) > 0.5) continue;
            acc += std::exp(p * std::abs(u(c))) * h * h;
        }
    }
    return acc;
}

HarmonicResidualReport harmonic_residual_report(const std::function<double(Vec2)>& u,
                                                const SignedMeasure& mu,
                                                const std::vector<CircleSample>& circles,
                                                int n_theta) {
    if (circles.empty())
        throw std::invalid_argument("harmonic_residual_report: no test circles");
    auto w = [&](Vec2 p) { return u(p) - eval_potential(mu, p); };
    HarmonicResidualReport rep;
    for (const auto& c : circles) {
        double avg = 0.0;
        for (int i = 0; i < n_theta; ++i) {
            const double th = kTwoPi * i / n_theta;
            avg += w(c.center + c.radius * Vec2{std::cos(th), std::sin(th)});
        }
        avg /= n_theta;
        rep.max_deviation = std::max(rep.max_deviation, std::abs(avg - w(c.center)));
        ++rep.circles_tested;
    }
    return rep;
}

}  // namespace gradlab
