#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gradlab/geometry.hpp"

namespace gradlab {

enum class DomainTag { Plane, Disk, TorusFundamental, Cylinder };

struct Atom {
    Vec2 pos;
    double weight = 0.0;
};

/// Cell-centered density sampled on a uniform grid. Values are measure
/// per unit area; the mass of cell (ix,iy) is value * cell^2.
struct DensityGrid {
    int nx = 0;
    int ny = 0;
    double cell = 0.0;
    Vec2 origin;  // lower-left corner of cell (0,0)
    std::vector<double> values;  // row-major, iy * nx + ix

    double cell_area() const { return cell * cell; }
    Vec2 cell_center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * cell, origin.y + (iy + 0.5) * cell};
    }
    double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }
    bool empty() const { return values.empty(); }
};

/// A signed Radon measure represented as point atoms plus an optional
/// cell density. Immutable after construction; zero-weight atoms are
/// dropped so that equal measures have equal representations.
class SignedMeasure {
public:
    SignedMeasure() = default;
    explicit SignedMeasure(std::vector<Atom> atoms, DomainTag tag = DomainTag::Plane);
    SignedMeasure(std::vector<Atom> atoms, DensityGrid density,
                  DomainTag tag = DomainTag::Plane);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<DensityGrid>& density() const { return density_; }
    DomainTag domain() const { return domain_; }
    bool is_atomic() const { return !density_.has_value() || density_->empty(); }
    bool empty() const { return atoms_.empty() && is_atomic(); }

private:
    std::vector<Atom> atoms_;
    std::optional<DensityGrid> density_;
    DomainTag domain_ = DomainTag::Plane;
};

struct RegionSpec {
    enum class Kind { Disk, Annulus, Rectangle };
    Kind kind = Kind::Disk;
    Vec2 center;
    double r_inner = 0.0;
    double r_outer = 0.0;
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    static RegionSpec disk(Vec2 c, double r);
    static RegionSpec annulus(Vec2 c, double r0, double r1);
    static RegionSpec rectangle(double xmin, double xmax, double ymin, double ymax);

    bool contains(Vec2 p) const;
};

/// |mu|: sum of |atom weights| plus the integral of |density|.
double total_variation(const SignedMeasure& mu);

/// Signed total mass mu(domain).
double total_mass(const SignedMeasure& mu);

/// Splits mu = mu_plus - mu_minus with both parts nonnegative and
/// represented on disjoint atoms/cells.
std::pair<SignedMeasure, SignedMeasure> jordan_decompose(const SignedMeasure& mu);

/// Keeps atoms inside the region and density cells whose center lies
/// inside. Empty intersection yields the zero measure.
SignedMeasure restrict(const SignedMeasure& mu, const RegionSpec& region);

}  // namespace gradlab
