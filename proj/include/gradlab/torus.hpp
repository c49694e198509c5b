#pragma once

#include <memory>
#include <vector>

#include "gradlab/measure.hpp"

namespace gradlab {

/// Flat torus lattice {1, a + b i} in normalized form:
/// -1/2 < a <= 1/2, b > 0, a^2 + b^2 >= 1, a >= 0 on the unit circle.
struct Lattice {
    double a = 0.0;
    double b = 1.0;
    double rho = 1.0;    // sqrt(a^2 + b^2)
    double theta = 0.0;  // arccos(a / rho), in [pi/3, 2pi/3)
    Vec2 v;              // (rho, 0)
    Vec2 w;              // (cos theta, sin theta)

    double cell_area() const { return rho * std::sin(theta); }
};

/// Reduces (a, b) by generator translations and inversion until the
/// normalization constraints hold.
Lattice normalize_lattice(double a, double b);

/// Shortest distance on the torus: min over translates y + i v + j w,
/// |i|, |j| <= 3 (sufficient once the lattice is normalized).
double torus_distance(const Lattice& L, Vec2 x, Vec2 y);

/// Spectral solution of -Laplace u = mu on the torus, zero-mean gauge.
/// Atoms enter with exact Fourier characters times a Gaussian mollifier;
/// density cells are rasterized as point masses at their centers.
class TorusSolution {
public:
    const Lattice& lattice() const { return lattice_; }
    int n1() const { return n1_; }  // along v
    int n2() const { return n2_; }  // along w
    double sigma() const { return sigma_; }
    double cell_area() const { return lattice_.cell_area() / (double(n1_) * n2_); }

    Vec2 grid_point(int i1, int i2) const {
        const double s = double(i1) / n1_, t = double(i2) / n2_;
        return s * lattice_.v + t * lattice_.w;
    }
    double u_at(int i1, int i2) const { return u_[static_cast<size_t>(i2) * n1_ + i1]; }
    Vec2 grad_at(int i1, int i2) const {
        const size_t k = static_cast<size_t>(i2) * n1_ + i1;
        return {ux_[k], uy_[k]};
    }
    double mollified_rhs_at(int i1, int i2) const {
        return rhs_[static_cast<size_t>(i2) * n1_ + i1];
    }

    /// Spectral -Laplace applied to the realized u grid (consistency oracle).
    std::vector<double> apply_minus_laplacian() const;

    friend TorusSolution solve_poisson(const Lattice& L, const SignedMeasure& mu, int N);

private:
    Lattice lattice_;
    int n1_ = 0, n2_ = 0;
    double sigma_ = 0.0;
    std::vector<double> u_, ux_, uy_, rhs_;
};

/// N is the resolution across the unit generator w; the resolution along v
/// is scaled by rho and rounded up to a power of two so cells stay roughly
/// square on elongated lattices.
TorusSolution solve_poisson(const Lattice& L, const SignedMeasure& mu, int N);

/// Integral of |grad u|^p over the torus ball {d(x, x0) <= r}.
double ball_gradient_integral(const TorusSolution& sol, Vec2 x0, double r, double p);

/// Flat area of the torus ball {d(x, x0) <= r}.
double torus_ball_area(const TorusSolution& sol, Vec2 x0, double r);

struct DegenerateFamilyRow {
    double b = 0.0;
    double r = 0.0;
    double normalized = 0.0;  // r^{(p-2)/p} ||grad u||_{L^p(B_r)} / (pi r^2 / Area)^{(p-1)/p}
};

struct DegenerateFamilyReport {
    std::vector<DegenerateFamilyRow> rows;
    double max_normalized = 0.0;
    double min_normalized = 0.0;
    double spread() const { return min_normalized > 0 ? max_normalized / min_normalized : 0.0; }
};

/// Sweeps lattices (0, b) with a fixed balanced dipole and reports the
/// normalized gradient functional across the degenerating family.
DegenerateFamilyReport degenerate_family_audit(const std::vector<double>& b_values, double p,
                                               const std::vector<double>& radii, int N = 512);

}  // namespace gradlab
