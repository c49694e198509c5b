#include "doctest.h"
#include "gradlab/log_potential.hpp"

#include <cmath>

using namespace gradlab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Midpoint-quadrature oracle for the rectangle kernel primitives.
template <typename F>
double midpoint_rect(F f, double xmin, double xmax, double ymin, double ymax, int n) {
    const double hx = (xmax - xmin) / n, hy = (ymax - ymin) / n;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            acc += f(Vec2{xmin + (ix + 0.5) * hx, ymin + (iy + 0.5) * hy});
    return acc * hx * hy;
}

DensityGrid gaussian_blob(int n, double cell, Vec2 origin) {
    DensityGrid g;
    g.nx = g.ny = n;
    g.cell = cell;
    g.origin = origin;
    g.values.resize(size_t(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 c = g.cell_center(ix, iy);
            g.at(ix, iy) = std::exp(-8.0 * norm2(c - Vec2{0.1, -0.05}));
        }
    return g;
}

}  // namespace

TEST_CASE("log kernel rectangle primitive vs midpoint quadrature") {
    auto oracle = [&](Vec2 x, double a, double b, double c, double d, int n) {
        return midpoint_rect([&](Vec2 y) { return std::log(dist(x, y)); }, a, b, c, d, n);
    };
    SUBCASE("evaluation point outside the rectangle") {
        const Vec2 x{-0.7, 0.4};
        const double exact = log_kernel_rect_integral(x, 0.0, 1.0, -0.5, 0.5);
        CHECK(exact == doctest::Approx(oracle(x, 0.0, 1.0, -0.5, 0.5, 512)).epsilon(1e-7));
    }
    SUBCASE("singularity inside the rectangle") {
        const Vec2 x{0.3, 0.1};
        const double exact = log_kernel_rect_integral(x, 0.0, 1.0, -0.5, 0.5);
        // Midpoint converges slowly across the log singularity; compare two
        // resolutions to confirm it approaches the closed form.
        const double q1 = oracle(x, 0.0, 1.0, -0.5, 0.5, 500);
        const double q2 = oracle(x, 0.0, 1.0, -0.5, 0.5, 1500);
        CHECK(std::abs(q2 - exact) < std::abs(q1 - exact));
        CHECK(exact == doctest::Approx(q2).epsilon(1e-5));
    }
    SUBCASE("singularity on the corner") {
        const Vec2 x{0.0, 0.0};
        const double exact = log_kernel_rect_integral(x, 0.0, 1.0, 0.0, 1.0);
        CHECK(exact == doctest::Approx(oracle(x, 0.0, 1.0, 0.0, 1.0, 1500)).epsilon(1e-4));
    }
}

TEST_CASE("gradient kernel rectangle primitive vs midpoint quadrature") {
    const Vec2 x{-0.4, 0.25};
    auto fx = [&](Vec2 y) { return (y.x - x.x) / norm2(y - x); };
    auto fy = [&](Vec2 y) { return (y.y - x.y) / norm2(y - x); };
    const Vec2 exact = grad_kernel_rect_integral(x, 0.0, 1.0, -0.5, 0.5);
    CHECK(exact.x == doctest::Approx(midpoint_rect(fx, 0.0, 1.0, -0.5, 0.5, 512)).epsilon(1e-6));
    CHECK(exact.y == doctest::Approx(midpoint_rect(fy, 0.0, 1.0, -0.5, 0.5, 512)).epsilon(1e-6));

    // Inside the rectangle the 1/r singularity is integrable; check
    // convergence toward the closed form.
    const Vec2 xin{0.3, 0.0};
    const Vec2 ein = grad_kernel_rect_integral(xin, 0.0, 1.0, -0.5, 0.5);
    auto gx = [&](Vec2 y) { return (y.x - xin.x) / norm2(y - xin); };
    const double q1 = midpoint_rect(gx, 0.0, 1.0, -0.5, 0.5, 501);
    const double q2 = midpoint_rect(gx, 0.0, 1.0, -0.5, 0.5, 1501);
    CHECK(std::abs(q2 - ein.x) < std::abs(q1 - ein.x));
    CHECK(ein.x == doctest::Approx(q2).epsilon(0.01));
}

TEST_CASE("potential of a unit atom is -log|x|/2pi") {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    for (double r : {0.01, 0.5, 1.0, 7.0}) {
        CHECK(eval_potential(mu, {r, 0.0}) ==
              doctest::Approx(-std::log(r) / kTwoPi).epsilon(1e-14));
    }
    CHECK(eval_potential(mu, {1.0, 0.0}) == 0.0);
}

TEST_CASE("potential is linear in the measure") {
    const SignedMeasure a({{{0.0, 0.0}, 1.0}});
    const SignedMeasure b({{{0.4, -0.2}, -2.5}});
    const SignedMeasure ab({{{0.0, 0.0}, 1.0}, {{0.4, -0.2}, -2.5}});
    const Vec2 x{1.3, 0.7};
    CHECK(eval_potential(ab, x) ==
          doctest::Approx(eval_potential(a, x) + eval_potential(b, x)).epsilon(1e-14));
}

TEST_CASE("gradient matches finite differences of the potential") {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}, {{0.5, 0.3}, -0.7}},
                           gaussian_blob(16, 0.05, {-0.4, -0.4}));
    const Vec2 pts[] = {{1.1, 0.2}, {-0.8, -0.6}, {0.2, 0.9}};
    const double h = 1e-5;
    for (const Vec2& x : pts) {
        const Vec2 g = eval_gradient(mu, x);
        const double fdx =
            (eval_potential(mu, {x.x + h, x.y}) - eval_potential(mu, {x.x - h, x.y})) / (2 * h);
        const double fdy =
            (eval_potential(mu, {x.x, x.y + h}) - eval_potential(mu, {x.x, x.y - h})) / (2 * h);
        CHECK(g.x == doctest::Approx(fdx).epsilon(1e-6));
        CHECK(g.y == doctest::Approx(fdy).epsilon(1e-6));
    }
}

TEST_CASE("evaluation at an atom raises a signed pole error") {
    const SignedMeasure mu({{{0.25, 0.25}, -3.0}});
    CHECK_THROWS_AS(eval_potential(mu, {0.25, 0.25}), PoleError);
    try {
        eval_gradient(mu, {0.25, 0.25});
        FAIL("expected PoleError");
    } catch (const PoleError& e) {
        CHECK(e.weight_sign < 0.0);
    }
}

TEST_CASE("scaling functional: centered atom, q = 1 gives exactly 1") {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    for (double r : {0.05, 1.0, 20.0})
        CHECK(scaling_functional(mu, {0.0, 0.0}, r, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    // Weight w scales the q = 1 value by |w|/... linearly.
    const SignedMeasure mu3({{{0.0, 0.0}, 3.0}});
    CHECK(scaling_functional(mu3, {0.0, 0.0}, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("scaling functional is dilation invariant for a centered atom") {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    for (double q : {1.0, 1.3, 1.5, 1.9}) {
        const double base = scaling_functional(mu, {0.0, 0.0}, 1.0, q);
        for (double r : {0.01, 0.37, 5.0, 100.0})
            CHECK(scaling_functional(mu, {0.0, 0.0}, r, q) ==
                  doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("scaling functional rejects bad parameters") {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    CHECK_THROWS_AS(scaling_functional(mu, {0.0, 0.0}, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(scaling_functional(mu, {0.0, 0.0}, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(scaling_functional(mu, {0.0, 0.0}, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("exp integrability: unit atom closed form") {
    // With eps = 2pi and tv = 1 the integrand on D_1 is 1/|x|, so the
    // integral over D_R is 2 pi R for R <= 1.
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    const double v_half = exp_integrability(mu, 0.5, M_PI * 2.0, 1024);
    const double v_one = exp_integrability(mu, 1.0, M_PI * 2.0, 1024);
    CHECK(v_half == doctest::Approx(M_PI).epsilon(0.005));
    CHECK(v_one == doctest::Approx(kTwoPi).epsilon(0.005));
    CHECK(v_one > v_half);  // monotone in R
    CHECK_THROWS_AS(exp_integrability(mu, 1.0, 0.0, 128), std::invalid_argument);
    CHECK_THROWS_AS(exp_integrability(mu, 1.0, 4.0 * M_PI, 128), std::invalid_argument);
}

TEST_CASE("moser-trudinger functional anchors") {
    const double area = M_PI / 4.0;  // |D_{1/2}|
    CHECK(moser_trudinger_functional([](Vec2) { return 0.0; }, 3.0, 512) ==
          doctest::Approx(area).epsilon(0.002));
    CHECK(moser_trudinger_functional([](Vec2) { return -0.7; }, 2.0, 512) ==
          doctest::Approx(std::exp(1.4) * area).epsilon(0.002));
}

TEST_CASE("harmonic residual vanishes for potential plus harmonic function") {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}, {{0.3, -0.2}, 0.5}});
    auto harmonic = [](Vec2 x) { return x.x * x.x - x.y * x.y + 2.0 * x.x; };
    auto u = [&](Vec2 x) { return eval_potential(mu, x) + harmonic(x); };
    const std::vector<CircleSample> circles = {
        {{1.0, 1.0}, 0.2}, {{-0.8, 0.4}, 0.35}, {{0.1, 1.2}, 0.5}};
    const auto rep = harmonic_residual_report(u, mu, circles);
    CHECK(rep.circles_tested == 3);
    CHECK(rep.max_deviation < 1e-8);

    auto bad = [&](Vec2 x) { return eval_potential(mu, x) + norm2(x); };
    const auto rep_bad = harmonic_residual_report(bad, mu, circles);
    CHECK(rep_bad.max_deviation > 1e-3);
}
