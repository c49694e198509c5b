#include "gradlab/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace gradlab {

namespace {

std::vector<Atom> drop_zero_atoms(std::vector<Atom> atoms) {
    std::vector<Atom> kept;
    kept.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (!std::isfinite(a.weight)) throw std::invalid_argument("atom weight must be finite");
        if (a.weight != 0.0) kept.push_back(a);
    }
    return kept;
}

}  // namespace

SignedMeasure::SignedMeasure(std::vector<Atom> atoms, DomainTag tag)
    : atoms_(drop_zero_atoms(std::move(atoms))), domain_(tag) {}

SignedMeasure::SignedMeasure(std::vector<Atom> atoms, DensityGrid density, DomainTag tag)
    : atoms_(drop_zero_atoms(std::move(atoms))), domain_(tag) {
    if (!density.empty()) {
        if (static_cast<size_t>(density.nx) * density.ny != density.values.size())
            throw std::invalid_argument("density grid dimensions mismatch");
        if (density.cell <= 0.0) throw std::invalid_argument("density cell size must be positive");
        density_ = std::move(density);
    }
}

RegionSpec RegionSpec::disk(Vec2 c, double r) {
    RegionSpec s;
    s.kind = Kind::Disk;
    s.center = c;
    s.r_outer = r;
    return s;
}

RegionSpec RegionSpec::annulus(Vec2 c, double r0, double r1) {
    RegionSpec s;
    s.kind = Kind::Annulus;
    s.center = c;
    s.r_inner = r0;
    s.r_outer = r1;
    return s;
}

RegionSpec RegionSpec::rectangle(double xmin, double xmax, double ymin, double ymax) {
    RegionSpec s;
    s.kind = Kind::Rectangle;
    s.xmin = xmin;
    s.xmax = xmax;
    s.ymin = ymin;
    s.ymax = ymax;
    return s;
}

bool RegionSpec::contains(Vec2 p) const {
    switch (kind) {
        case Kind::Disk:
            return dist(p, center) <= r_outer;
        case Kind::Annulus: {
            const double d = dist(p, center);
            return d >= r_inner && d <= r_outer;
        }
        case Kind::Rectangle:
            return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    return false;
}

double total_variation(const SignedMeasure& mu) {
    double tv = 0.0;
    for (const auto& a : mu.atoms()) tv += std::abs(a.weight);
    if (mu.density()) {
        const auto& d = *mu.density();
        for (double v : d.values) tv += std::abs(v) * d.cell_area();
    }
    return tv;
}

double total_mass(const SignedMeasure& mu) {
    double m = 0.0;
    for (const auto& a : mu.atoms()) m += a.weight;
    if (mu.density()) {
        const auto& d = *mu.density();
        for (double v : d.values) m += v * d.cell_area();
    }
    return m;
}

std::pair<SignedMeasure, SignedMeasure> jordan_decompose(const SignedMeasure& mu) {
    std::vector<Atom> plus_atoms, minus_atoms;
    for (const auto& a : mu.atoms()) {
        if (a.weight > 0.0)
            plus_atoms.push_back(a);
        else
            minus_atoms.push_back({a.pos, -a.weight});
    }
    if (!mu.density()) {
        return {SignedMeasure(std::move(plus_atoms), mu.domain()),
                SignedMeasure(std::move(minus_atoms), mu.domain())};
    }
    DensityGrid plus = *mu.density();
    DensityGrid minus = *mu.density();
    for (size_t i = 0; i < plus.values.size(); ++i) {
        const double v = mu.density()->values[i];
        plus.values[i] = v > 0.0 ? v : 0.0;
        minus.values[i] = v < 0.0 ? -v : 0.0;
    }
    return {SignedMeasure(std::move(plus_atoms), std::move(plus), mu.domain()),
            SignedMeasure(std::move(minus_atoms), std::move(minus), mu.domain())};
}

SignedMeasure restrict(const SignedMeasure& mu, const RegionSpec& region) {
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms())
        if (region.contains(a.pos)) atoms.push_back(a);
    if (!mu.density()) return SignedMeasure(std::move(atoms), mu.domain());

    DensityGrid d = *mu.density();
    bool any = false;
    for (int iy = 0; iy < d.ny; ++iy)
        for (int ix = 0; ix < d.nx; ++ix) {
            if (!region.contains(d.cell_center(ix, iy)))
                d.at(ix, iy) = 0.0;
            else if (d.at(ix, iy) != 0.0)
                any = true;
        }
    if (!any) return SignedMeasure(std::move(atoms), mu.domain());
    return SignedMeasure(std::move(atoms), std::move(d), mu.domain());
}

}  // namespace gradlab
