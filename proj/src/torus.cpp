#include "gradlab/torus.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace gradlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(double x) {
    int n = 1;
    while (n < x) n <<= 1;
    return n;
}

struct Cdata {
    fftw_complex* p = nullptr;
    explicit Cdata(size_t n) { p = fftw_alloc_complex(n); }
    ~Cdata() { fftw_free(p); }
    Cdata(const Cdata&) = delete;
    Cdata& operator=(const Cdata&) = delete;
};

}  // namespace

Lattice normalize_lattice(double a, double b) {
    if (b == 0.0) throw std::invalid_argument("normalize_lattice: degenerate lattice (b = 0)");
    if (b < 0.0) {
        a = -a;
        b = -b;
    }
    for (int iter = 0; iter < 64; ++iter) {
        a -= std::round(a);
        if (a <= -0.5) a += 1.0;
        if (a > 0.5) a -= 1.0;
        const double n2 = a * a + b * b;
        if (n2 < 1.0 - 1e-14) {
            // tau -> -1/tau
            const double na = -a / n2, nb = b / n2;
            a = na;
            b = nb;
            continue;
        }
        if (std::abs(n2 - 1.0) <= 1e-14 && a < 0.0) a = -a;
        break;
    }
    Lattice L;
    L.a = a;
    L.b = b;
    L.rho = std::hypot(a, b);
    L.theta = std::acos(a / L.rho);
    L.v = {L.rho, 0.0};
    L.w = {std::cos(L.theta), std::sin(L.theta)};
    return L;
}

double torus_distance(const Lattice& L, Vec2 x, Vec2 y) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            const Vec2 t = y + double(i) * L.v + double(j) * L.w;
            best = std::min(best, dist(x, t));
        }
    return best;
}

namespace {

// Fractional lattice coordinates of p: p = s v + t w.
std::pair<double, double> frac_coords(const Lattice& L, Vec2 p) {
    const double st = std::sin(L.theta), ct = std::cos(L.theta);
    const double t = p.y / st;
    const double s = (p.x - p.y * ct / st) / L.rho;
    return {s, t};
}

double reduced_torus_distance(const Lattice& L, double ds, double dt) {
    // ds, dt are fractional-coordinate differences; wrap then scan neighbors.
    ds -= std::round(ds);
    dt -= std::round(dt);
    double best = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            const Vec2 d = (ds + i) * L.v + (dt + j) * L.w;
            best = std::min(best, norm2(d));
        }
    return std::sqrt(best);
}

}  // namespace

TorusSolution solve_poisson(const Lattice& L, const SignedMeasure& mu, int N) {
    if (!is_pow2(N)) throw std::invalid_argument("solve_poisson: N must be a power of two");

    // Point masses: atoms plus rasterized density cells.
    std::vector<Atom> masses = mu.atoms();
    if (mu.density()) {
        const auto& d = *mu.density();
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix)
                if (d.at(ix, iy) != 0.0)
                    masses.push_back({d.cell_center(ix, iy), d.at(ix, iy) * d.cell_area()});
    }
    double mass = 0.0, tv = 0.0;
    for (const auto& m : masses) {
        mass += m.weight;
        tv += std::abs(m.weight);
    }
    if (std::abs(mass) > 1e-9 * std::max(tv, 1.0))
        throw std::invalid_argument("solve_poisson: measure must have zero total mass");

    TorusSolution sol;
    sol.lattice_ = L;
    sol.n2_ = N;
    sol.n1_ = next_pow2(double(N) * L.rho);
    const int n1 = sol.n1_, n2 = sol.n2_;
    const double area = L.cell_area();
    sol.sigma_ = 3.0 * std::max(L.rho / n1, 1.0 / n2);

    const double st = std::sin(L.theta), ct = std::cos(L.theta);
    const Vec2 vstar{1.0 / L.rho, -ct / (L.rho * st)};
    const Vec2 wstar{0.0, 1.0 / st};

    // Per-mass character tables over each frequency axis.
    const size_t n_total = static_cast<size_t>(n1) * n2;
    std::vector<std::complex<double>> rowc(static_cast<size_t>(masses.size()) * n2);
    std::vector<std::complex<double>> colc(static_cast<size_t>(masses.size()) * n1);
    for (size_t j = 0; j < masses.size(); ++j) {
        auto [s, t] = frac_coords(L, masses[j].pos);
        const std::complex<double> es = std::exp(std::complex<double>(0.0, -kTwoPi * s));
        const std::complex<double> et = std::exp(std::complex<double>(0.0, -kTwoPi * t));
        std::complex<double> acc{1.0, 0.0};
        for (int m = 0; m < n1; ++m) {
            colc[j * n1 + m] = acc;
            acc *= es;
        }
        acc = {1.0, 0.0};
        for (int n = 0; n < n2; ++n) {
            rowc[j * n2 + n] = acc;
            acc *= et;
        }
    }

    Cdata spec(n_total), work(n_total);
    fftw_plan plan = fftw_plan_dft_2d(n2, n1, spec.p, work.p, FFTW_BACKWARD, FFTW_ESTIMATE);

    // Mollified measure coefficients mu_hat(m, n).
    std::vector<std::complex<double>> mu_hat(n_total);
    for (int r = 0; r < n2; ++r) {
        const int n = r <= n2 / 2 ? r : r - n2;
        for (int cidx = 0; cidx < n1; ++cidx) {
            const int m = cidx <= n1 / 2 ? cidx : cidx - n1;
            const size_t k = static_cast<size_t>(r) * n1 + cidx;
            if ((m == 0 && n == 0) || cidx == n1 / 2 || r == n2 / 2) {
                mu_hat[k] = 0.0;
                continue;
            }
            const Vec2 kv = kTwoPi * (double(m) * vstar + double(n) * wstar);
            const double k2 = norm2(kv);
            std::complex<double> chars{0.0, 0.0};
            for (size_t j = 0; j < masses.size(); ++j) {
                // Character index uses the unsigned bin (periodic in m, n).
                chars += masses[j].weight * colc[j * n1 + cidx] * rowc[j * n2 + r];
            }
            mu_hat[k] = chars / area * std::exp(-0.5 * k2 * sol.sigma_ * sol.sigma_);
        }
    }

    auto run = [&](auto fill, std::vector<double>& out) {
        for (int r = 0; r < n2; ++r)
            for (int cidx = 0; cidx < n1; ++cidx) {
                const int n = r <= n2 / 2 ? r : r - n2;
                const int m = cidx <= n1 / 2 ? cidx : cidx - n1;
                const size_t k = static_cast<size_t>(r) * n1 + cidx;
                const std::complex<double> val = fill(mu_hat[k], m, n);
                spec.p[k][0] = val.real();
                spec.p[k][1] = val.imag();
            }
        fftw_execute(plan);
        out.resize(n_total);
        for (size_t k = 0; k < n_total; ++k) out[k] = work.p[k][0];
    };

    auto kvec = [&](int m, int n) { return kTwoPi * (double(m) * vstar + double(n) * wstar); };
    auto inv_k2 = [&](std::complex<double> mh, int m, int n) -> std::complex<double> {
        if (m == 0 && n == 0) return 0.0;
        return mh / norm2(kvec(m, n));
    };

    run([&](std::complex<double> mh, int m, int n) { return inv_k2(mh, m, n); }, sol.u_);
    run(
        [&](std::complex<double> mh, int m, int n) {
            return std::complex<double>(0.0, 1.0) * kvec(m, n).x * inv_k2(mh, m, n);
        },
        sol.ux_);
    run(
        [&](std::complex<double> mh, int m, int n) {
            return std::complex<double>(0.0, 1.0) * kvec(m, n).y * inv_k2(mh, m, n);
        },
        sol.uy_);
    run([&](std::complex<double> mh, int, int) { return mh; }, sol.rhs_);

    fftw_destroy_plan(plan);
    return sol;
}

std::vector<double> TorusSolution::apply_minus_laplacian() const {
    const int n1 = n1_, n2 = n2_;
    const size_t n_total = static_cast<size_t>(n1) * n2;
    Cdata in(n_total), out(n_total);
    for (size_t k = 0; k < n_total; ++k) {
        in.p[k][0] = u_[k];
        in.p[k][1] = 0.0;
    }
    fftw_plan fwd = fftw_plan_dft_2d(n2, n1, in.p, out.p, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    const double st = std::sin(lattice_.theta), ct = std::cos(lattice_.theta);
    const Vec2 vstar{1.0 / lattice_.rho, -ct / (lattice_.rho * st)};
    const Vec2 wstar{0.0, 1.0 / st};
    const double scale = 1.0 / double(n_total);
    for (int r = 0; r < n2; ++r)
        for (int cidx = 0; cidx < n1; ++cidx) {
            const int n = r <= n2 / 2 ? r : r - n2;
            const int m = cidx <= n1 / 2 ? cidx : cidx - n1;
            const size_t k = static_cast<size_t>(r) * n1 + cidx;
            const double k2 = norm2(kTwoPi * (double(m) * vstar + double(n) * wstar));
            out.p[k][0] *= k2 * scale;
            out.p[k][1] *= k2 * scale;
        }
    Cdata res(n_total);
    fftw_plan bwd = fftw_plan_dft_2d(n2, n1, out.p, res.p, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    std::vector<double> result(n_total);
    for (size_t k = 0; k < n_total; ++k) result[k] = res.p[k][0];
    return result;
}

namespace {

template <typename F>
void for_ball_nodes(const TorusSolution& sol, Vec2 x0, double r, F body) {
    const Lattice& L = sol.lattice();
    auto [s0, t0] = frac_coords(L, x0);
    const int n1 = sol.n1(), n2 = sol.n2();
    for (int i2 = 0; i2 < n2; ++i2) {
        const double dt = double(i2) / n2 - t0;
        for (int i1 = 0; i1 < n1; ++i1) {
            const double ds = double(i1) / n1 - s0;
            if (reduced_torus_distance(L, ds, dt) <= r) body(i1, i2);
        }
    }
}

}  // namespace

double ball_gradient_integral(const TorusSolution& sol, Vec2 x0, double r, double p) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_gradient_integral: r must be positive");
    const double cell_edge = std::max(sol.lattice().rho / sol.n1(), 1.0 / sol.n2());
    if (r < 5.0 * cell_edge)
        std::fprintf(stderr, "warning: ball radius %.3g under-resolved (cell %.3g)\n", r,
                     cell_edge);
    const double ca = sol.cell_area();
    double acc = 0.0;
    for_ball_nodes(sol, x0, r, [&](int i1, int i2) {
        acc += std::pow(norm(sol.grad_at(i1, i2)), p) * ca;
    });
    return acc;
}

double torus_ball_area(const TorusSolution& sol, Vec2 x0, double r) {
    const double ca = sol.cell_area();
    double acc = 0.0;
    for_ball_nodes(sol, x0, r, [&](int, int) { acc += ca; });
    return acc;
}

DegenerateFamilyReport degenerate_family_audit(const std::vector<double>& b_values, double p,
                                               const std::vector<double>& radii, int N) {
    if (!(p >= 1.0 && p < 2.0))
        throw std::invalid_argument("degenerate_family_audit: p in [1,2)");
    DegenerateFamilyReport rep;
    rep.min_normalized = std::numeric_limits<double>::infinity();
    for (double b : b_values) {
        if (!(b >= 1.0)) throw std::invalid_argument("degenerate_family_audit: b >= 1");
        const Lattice L = normalize_lattice(0.0, b);
        const Vec2 p1{0.25, 0.5}, p2{0.75, 0.5};
        const SignedMeasure mu({{p1, 1.0}, {p2, -1.0}}, DomainTag::TorusFundamental);
        const TorusSolution sol = solve_poisson(L, mu, N);
        for (double r : radii) {
            const double gp = ball_gradient_integral(sol, p1, r, p);
            const double lp = std::pow(gp, 1.0 / p);
            const double ar = torus_ball_area(sol, p1, r);
            const double area_factor = std::pow(M_PI * r * r / ar, (p - 1.0) / p);
            const double q = std::pow(r, (p - 2.0) / p) * lp / area_factor;
            rep.rows.push_back({b, r, q});
            rep.max_normalized = std::max(rep.max_normalized, q);
            rep.min_normalized = std::min(rep.min_normalized, q);
        }
    }
    return rep;
}

}  // namespace gradlab
