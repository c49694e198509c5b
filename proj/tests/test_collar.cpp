#include "doctest.h"
#include "gradlab/collar.hpp"

#include <cmath>
#include <stdexcept>

using namespace gradlab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double gd_inverse(double x) { return std::log(std::tan(0.25 * M_PI + 0.5 * x)); }

}  // namespace

TEST_CASE("collar parameters") {
    const double lmax = 2.0 * std::asinh(1.0);
    const CollarParams edge = collar_from_length(lmax - 1e-9);
    CHECK(edge.w == doctest::Approx(std::asinh(1.0)).epsilon(1e-6));
    const CollarParams p = collar_from_length(0.37);
    CHECK(p.lambda == 0.37 / kTwoPi);
    CHECK(p.lambda * p.T < M_PI / 2.0);
    CHECK(p.w == doctest::Approx(std::asinh(1.0 / std::sinh(0.185))).epsilon(1e-14));
    const CollarParams tiny = collar_from_length(1e-3);
    CHECK(std::abs(tiny.w - std::log(4.0 / 1e-3)) <= 10.0 * 1e-3);
    CHECK_THROWS_AS(collar_from_length(0.0), std::invalid_argument);
    CHECK_THROWS_AS(collar_from_length(lmax + 0.1), std::invalid_argument);
}

TEST_CASE("fermi coordinate map") {
    const CollarParams p = collar_from_length(0.2);
    CHECK(fermi_to_cylinder(p, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fermi_to_cylinder(p, p.w * (1.0 - 1e-9)) == doctest::Approx(p.T).epsilon(1e-6));
    CHECK_THROWS_AS(fermi_to_cylinder(p, p.w), std::invalid_argument);

    // cosh(rho) cos(lambda t(rho)) = 1, so the pulled-back conformal factor
    // lambda / cos(lambda t) equals lambda cosh(rho).
    double prev = -1e300;
    for (int i = 0; i <= 1000; ++i) {
        const double rho = -p.w + (i + 0.5) * 2.0 * p.w / 1002.0;
        const double t = fermi_to_cylinder(p, rho);
        CHECK(t > prev);  // strictly increasing
        prev = t;
        CHECK(std::cosh(rho) * std::cos(p.lambda * t) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(collar_conformal_factor(p, t) ==
              doctest::Approx(p.lambda * std::cosh(rho)).epsilon(1e-10));
        // Round trip through the inverse Gudermannian.
        CHECK(gd_inverse(p.lambda * t) == doctest::Approx(rho).epsilon(1e-10));
    }
}

TEST_CASE("conformal factor basics") {
    const CollarParams p = collar_from_length(0.001);
    CHECK(collar_conformal_factor(p, 0.0) == p.lambda);
    CHECK(collar_conformal_factor(p, 13.0) == collar_conformal_factor(p, -13.0));
    CHECK(std::isfinite(collar_conformal_factor(p, p.T * (1.0 - 1e-12))));
    CHECK_THROWS_AS(collar_conformal_factor(p, p.T), std::invalid_argument);
}

TEST_CASE("collar distance closed form") {
    const CollarParams p = collar_from_length(0.05);
    CHECK(collar_distance(p, 3.0, 3.0) == 0.0);
    // Additivity is exact: a single antiderivative difference.
    const double d13 = collar_distance(p, -5.0, 20.0);
    CHECK(collar_distance(p, -5.0, 4.0) + collar_distance(p, 4.0, 20.0) ==
          doctest::Approx(d13).epsilon(1e-14));
    // Appendix form for the distance from circle T - t to the boundary circle.
    const double t = 7.0;
    const double appendix =
        std::log((1.0 + std::sin(p.lambda * p.T)) / (1.0 + std::sin(p.lambda * (p.T - t)))) -
        std::log(std::cos(p.lambda * p.T) / std::cos(p.lambda * (p.T - t)));
    CHECK(collar_distance(p, p.T - t, p.T) == doctest::Approx(appendix).epsilon(1e-12));
    CHECK_THROWS_AS(collar_distance(p, -p.T - 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(collar_distance(p, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("distance asymptote at the fixed probe point") {
    const CollarParams p = collar_from_length(1e-3);
    const double t = M_PI * (M_E - 1.0);  // -log(pi/(pi+t)) = 1
    CHECK(std::abs(collar_distance(p, p.T - t, p.T) - 1.0) <= 1e-2);
}

TEST_CASE("injectivity radius profile") {
    const CollarParams p = collar_from_length(1e-3);
    CHECK(injectivity_radius_profile(p, 0.0) ==
          doctest::Approx(std::asinh(std::cosh(5e-4))).epsilon(1e-12));
    // sinh r tracks pi/(pi+t) for small l.
    double prev = 1e300;
    for (double t = 0.0; t <= 10.0; t += 0.5) {
        const double r = injectivity_radius_profile(p, t);
        CHECK(std::abs(std::sinh(r) - M_PI / (M_PI + t)) <= 1e-2);
        CHECK(r < prev + 1e-15);  // decreasing in t
        prev = r;
    }
    CHECK_THROWS_AS(injectivity_radius_profile(p, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(injectivity_radius_profile(p, 2.0 * p.T), std::invalid_argument);
}

TEST_CASE("ratio bound audit") {
    const CollarParams p = collar_from_length(0.01);
    const RatioBoundReport one = ratio_bound_audit(p, {{5.0, 5.0}});
    CHECK(one.evaluated == 1);
    CHECK(one.min_ratio == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.all_pass);

    // Worst admissible pair near the cylinder end stays inside (e^-2, e^2).
    const double eps = 1e-6;
    const double t1 = p.T - 1.0 - eps;
    const RatioBoundReport worst = ratio_bound_audit(p, {{t1, t1 - (2.0 - eps)}});
    CHECK(worst.evaluated == 1);
    CHECK(worst.all_pass);
    CHECK(worst.max_ratio < std::exp(2.0));

    // Precondition violations are flagged, not evaluated.
    const RatioBoundReport flagged = ratio_bound_audit(p, {{p.T - 0.5, p.T - 0.4}});
    CHECK(flagged.evaluated == 0);
    CHECK(flagged.flagged == 1);
}

TEST_CASE("hyperbolic ball area") {
    CHECK(hyperbolic_ball_area(0.0) == 0.0);
    const double r = 1e-2;
    CHECK(hyperbolic_ball_area(r) / (M_PI * r * r) ==
          doctest::Approx(1.0 + r * r / 12.0).epsilon(1e-8));
    CHECK_THROWS_AS(hyperbolic_ball_area(-1.0), std::invalid_argument);
}

TEST_CASE("disk chart factor") {
    const double r = 1.0;
    CHECK(disk_chart_factor(r, {0.0, 0.0}) == doctest::Approx(2.0 * std::sinh(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(disk_chart_factor(5.0, {0.9, 0.0}), std::invalid_argument);

    // Gauss curvature -lap(log f)/f^2 is identically -1; check by
    // Richardson-extrapolated finite differences.
    auto logf = [&](double x, double y) { return std::log(disk_chart_factor(r, {x, y})); };
    auto curvature_fd = [&](Vec2 x, double h) {
        const double lap = (logf(x.x + h, x.y) + logf(x.x - h, x.y) + logf(x.x, x.y + h) +
                            logf(x.x, x.y - h) - 4.0 * logf(x.x, x.y)) /
                           (h * h);
        const double f = disk_chart_factor(r, x);
        return -lap / (f * f);
    };
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.3, -0.2}, Vec2{0.6, 0.5}}) {
        const double k1 = curvature_fd(x, 2e-3), k2 = curvature_fd(x, 1e-3);
        const double k = (4.0 * k2 - k1) / 3.0;
        CHECK(k == doctest::Approx(-1.0).epsilon(1e-6));
    }

    // Radial chart distance from the center to the rim: exact antiderivative
    // of 2s/(1-s^2 sinh^2(r/2)) gives 2 artanh(sinh(r/2)) -- notably not r.
    const int n = 1 << 16;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = (i + 0.5) / n;
        acc += disk_chart_factor(r, {s, 0.0}) / n;
    }
    CHECK(acc == doctest::Approx(2.0 * std::atanh(std::sinh(0.5))).epsilon(1e-6));
}

TEST_CASE("covering count bound") {
    const TopologyData genus2{2};
    CHECK(genus2.chi() == -2);
    CHECK(genus2.area() == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(covering_count_bound(genus2, 1.0) == 400);
    CHECK(covering_count_bound(genus2, 0.5) > covering_count_bound(genus2, 1.0));
    CHECK_THROWS_AS(covering_count_bound(TopologyData{1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(covering_count_bound(genus2, 0.0), std::invalid_argument);
}

TEST_CASE("strip gradient audit") {
    const CollarParams p = collar_from_length(0.05);
    const StripGradientReport zero =
        collar_strip_gradient_audit(p, [](double, double) { return Vec2{0.0, 0.0}; }, 2, 5);
    CHECK(zero.integral == 0.0);
    CHECK(zero.lengths_monotone);

    // u = t has unit Euclidean gradient; the weighted integral telescopes
    // to 2 pi times the inter-circle distance.
    const StripGradientReport lin =
        collar_strip_gradient_audit(p, [](double, double) { return Vec2{1.0, 0.0}; }, 2, 5);
    CHECK(lin.ratio == doctest::Approx(kTwoPi).epsilon(1e-4));
    CHECK(lin.distance == doctest::Approx(collar_distance(p, 2.0, 5.0)).epsilon(1e-14));
    CHECK_THROWS_AS(
        collar_strip_gradient_audit(p, [](double, double) { return Vec2{0.0, 0.0}; }, 5, 2),
        std::invalid_argument);
}

TEST_CASE("cylinder potential solves the mode equation") {
    const CollarParams p = collar_from_length(0.05);
    const CylinderPotential cp(p, 1.5, 0.7);
    const double L = cp.half_length();
    // Dirichlet ends.
    CHECK(cp.value(L, 0.3) == 0.0);
    CHECK(cp.value(-L, 2.0) == 0.0);
    // Away from the source the potential is harmonic on the flat cylinder.
    auto lap = [&](double t, double th, double h) {
        return (cp.value(t + h, th) + cp.value(t - h, th) + cp.value(t, th + h) +
                cp.value(t, th - h) - 4.0 * cp.value(t, th)) /
               (h * h);
    };
    for (double t : {-20.0, 8.0, 40.0}) CHECK(std::abs(lap(t, 2.0, 1e-3)) < 1e-5);
    // Gradient matches finite differences.
    const double h = 1e-5;
    const Vec2 g = cp.gradient(8.0, 2.0);
    CHECK(g.x ==
          doctest::Approx((cp.value(8.0 + h, 2.0) - cp.value(8.0 - h, 2.0)) / (2 * h))
              .epsilon(1e-6));
    CHECK(g.y ==
          doctest::Approx((cp.value(8.0, 2.0 + h) - cp.value(8.0, 2.0 - h)) / (2 * h))
              .epsilon(1e-6));
}

TEST_CASE("dyadic assembly bound") {
    CHECK(annulus_estimate_audit(0.0, 1.0, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(annulus_estimate_audit(0.0, 1.5, 1.0) ==
          doctest::Approx(1.0 / (std::sqrt(2.0) - 1.0)).epsilon(1e-13));
    // Finite truncation: a = 2^-m keeps the first m terms.
    CHECK(annulus_estimate_audit(0.25, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    // Divergence endpoint.
    CHECK(annulus_estimate_audit(0.0, 1.999, 1.0) > 500.0);
    CHECK_THROWS_AS(annulus_estimate_audit(0.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(annulus_estimate_audit(0.3, 1.0, 1.0), std::invalid_argument);
}
