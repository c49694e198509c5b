#include "gradlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gradlab/collar.hpp"
#include "gradlab/disk_geometry.hpp"
#include "gradlab/log_potential.hpp"
#include "gradlab/torus.hpp"

namespace gradlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

[[noreturn]] void config_error(const std::string& section, const std::string& key,
                               const std::string& what) {
    throw std::invalid_argument("config [" + section + "] " + key + ": " + what);
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        config_error(section, key, "not a number: '" + v + "'");
    }
}

int parse_int(const std::string& section, const std::string& key, const std::string& v) {
    const double x = parse_double(section, key, v);
    if (x != std::floor(x)) config_error(section, key, "not an integer: '" + v + "'");
    return static_cast<int>(x);
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& v) {
    std::vector<double> out;
    for (const auto& tok : split(v, ',')) out.push_back(parse_double(section, key, tok));
    return out;
}

/// SplitMix64; fixed algorithm so sequences are stable across platforms
/// and standard library versions.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }
};

/// Measure literal: "w@(x,y); w@(x,y); ...". "delta" is shorthand for
/// a unit atom at the origin.
SignedMeasure parse_measure_literal(const std::string& section, const std::string& key,
                                    const std::string& text) {
    if (trim(text) == "delta") return SignedMeasure({{{0.0, 0.0}, 1.0}});
    std::vector<Atom> atoms;
    for (const auto& tok : split(text, ';')) {
        const auto at = tok.find('@');
        const auto lp = tok.find('(');
        const auto comma = tok.find(',', lp);
        const auto rp = tok.find(')', lp);
        if (at == std::string::npos || lp == std::string::npos || comma == std::string::npos ||
            rp == std::string::npos)
            config_error(section, key, "bad atom literal '" + tok + "', want w@(x,y)");
        const double w = parse_double(section, key, trim(tok.substr(0, at)));
        const double x = parse_double(section, key, trim(tok.substr(lp + 1, comma - lp - 1)));
        const double y = parse_double(section, key, trim(tok.substr(comma + 1, rp - comma - 1)));
        atoms.push_back({{x, y}, w});
    }
    return SignedMeasure(std::move(atoms));
}

/// Runs independent units on `jobs` threads; results land at fixed indices
/// so output order never depends on scheduling.
void run_tasks(std::vector<std::function<void()>>& tasks, int jobs) {
    if (jobs <= 1 || tasks.size() <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                tasks[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, int(tasks.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

ResultRow make_row(std::string experiment, std::vector<std::pair<std::string, std::string>> params,
                   double value, double bound, bool pass, double ms = 0.0) {
    return {std::move(experiment), std::move(params), value, bound, pass, ms};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------- potential

std::vector<ResultRow> run_potential(const ExperimentConfig& cfg) {
    const std::string sec = "potential";
    const int grid = parse_int(sec, "grid", cfg.get(sec, "grid", "1024"));
    const int bumps = parse_int(sec, "bumps", cfg.get(sec, "bumps", "5"));
    const double tol = parse_double(sec, "tol", cfg.get(sec, "tol", "1e-3"));
    const auto qs = parse_list(sec, "q", cfg.get(sec, "q", "1,1.5"));
    const auto rs = parse_list(sec, "r", cfg.get(sec, "r", "0.1,1,10"));
    const double eps = parse_double(sec, "eps", cfg.get(sec, "eps", "6.283185307179586"));
    const auto Rs = parse_list(sec, "R", cfg.get(sec, "R", "0.25,0.5,1"));
    const int exp_grid = parse_int(sec, "exp_grid", cfg.get(sec, "exp_grid", "1024"));
    const SignedMeasure mu =
        parse_measure_literal(sec, "measure", cfg.get(sec, "measure", "delta"));

    if (grid < 16) config_error(sec, "grid", "grid >= 16 required");
    if (bumps < 0) config_error(sec, "bumps", "bumps >= 0 required");
    for (double q : qs)
        if (!(q >= 1.0 && q < 2.0)) config_error(sec, "q", "q in [1,2) required");
    for (double r : rs)
        if (!(r > 0.0)) config_error(sec, "r", "r > 0 required");
    if (!(eps > 0.0 && eps < 2.0 * kTwoPi)) config_error(sec, "eps", "eps in (0, 4pi) required");
    for (double R : Rs)
        if (!(R > 0.0)) config_error(sec, "R", "R > 0 required");
    if (mu.empty()) config_error(sec, "measure", "nonempty measure required");

    std::vector<double> bump_res(bumps);
    std::vector<std::vector<double>> scaling(qs.size(), std::vector<double>(rs.size()));
    std::vector<double> growth(Rs.size());
    std::vector<std::function<void()>> tasks;
    for (int i = 0; i < bumps; ++i)
        tasks.push_back([&, i] {
            bump_res[i] = weak_solution_residual(mu, cfg.seed * 1000 + i, grid);
        });
    for (size_t qi = 0; qi < qs.size(); ++qi)
        for (size_t ri = 0; ri < rs.size(); ++ri)
            tasks.push_back([&, qi, ri] {
                scaling[qi][ri] = scaling_functional(mu, {0.0, 0.0}, rs[ri], qs[qi]);
            });
    for (size_t i = 0; i < Rs.size(); ++i)
        tasks.push_back([&, i] { growth[i] = exp_integrability(mu, Rs[i], eps, exp_grid); });
    run_tasks(tasks, cfg.jobs);

    std::vector<ResultRow> rows;
    for (int i = 0; i < bumps; ++i)
        rows.push_back(make_row(sec, {{"check", "weak"}, {"bump", std::to_string(i)}},
                                bump_res[i], tol, bump_res[i] <= tol));
    for (size_t qi = 0; qi < qs.size(); ++qi) {
        if (rs.empty()) continue;
        const double ref = scaling[qi][0];
        for (size_t ri = 0; ri < rs.size(); ++ri)
            rows.push_back(make_row(sec,
                                    {{"check", "scaling"}, {"q", fmt(qs[qi])}, {"r", fmt(rs[ri])}},
                                    scaling[qi][ri], ref,
                                    std::abs(scaling[qi][ri] - ref) <= 1e-6));
        if (qs[qi] == 1.0)
            rows.push_back(make_row(sec, {{"check", "scaling-anchor"}, {"q", "1"}}, ref, 1.0,
                                    std::abs(ref - 1.0) <= 1e-4));
    }
    for (size_t i = 0; i < Rs.size(); ++i) {
        const bool anchored = Rs[i] == 1.0;
        rows.push_back(make_row(sec, {{"check", "growth"}, {"R", fmt(Rs[i])}}, growth[i],
                                anchored ? kTwoPi : 0.0,
                                !anchored || std::abs(growth[i] / kTwoPi - 1.0) <= 0.01));
        if (i + 1 < Rs.size() && Rs[i + 1] == 2.0 * Rs[i]) {
            const double ratio = growth[i + 1] / growth[i];
            const double cap = std::pow(2.0, eps / kTwoPi) * 1.05;
            rows.push_back(make_row(sec, {{"check", "growth-ratio"}, {"R", fmt(Rs[i])}}, ratio,
                                    cap, ratio <= cap));
        }
    }
    return rows;
}

// ---------------------------------------------------------------- disk-area

SignedMeasure random_curvature_measure(Rng& rng) {
    // K^- mass stays below pi by construction: at most 4 atoms, |w| <= 0.7.
    const int n = rng.uniform_int(1, 4);
    std::vector<Atom> atoms(n);
    for (auto& a : atoms) {
        a.pos = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        a.weight = rng.uniform(-0.7, 0.7);
    }
    return SignedMeasure(std::move(atoms));
}

std::vector<ResultRow> run_disk_area(const ExperimentConfig& cfg) {
    const std::string sec = "disk-area";
    const int measures = parse_int(sec, "measures", cfg.get(sec, "measures", "6"));
    const int grid = parse_int(sec, "grid", cfg.get(sec, "grid", "256"));
    const int samples = parse_int(sec, "samples", cfg.get(sec, "samples", "3"));
    const double margin = parse_double(sec, "margin", cfg.get(sec, "margin", "0.05"));
    const auto ks = parse_list(sec, "k", cfg.get(sec, "k", "1,2,4,8"));
    const int cgrid = parse_int(sec, "counter_grid", cfg.get(sec, "counter_grid", "512"));

    if (measures < 0) config_error(sec, "measures", "measures >= 0 required");
    if (grid < 32) config_error(sec, "grid", "grid >= 32 required");
    if (samples < 1) config_error(sec, "samples", "samples >= 1 required");
    if (!(margin >= 0.0)) config_error(sec, "margin", "margin >= 0 required");
    if (cgrid < 32) config_error(sec, "counter_grid", "counter_grid >= 32 required");
    for (double k : ks)
        if (!(k > 0.0)) config_error(sec, "k", "k > 0 required");

    struct AuditOut {
        double worst = 0.0, bound = 0.0;
        bool pass = false;
        int unclipped = 0;
    };
    std::vector<AuditOut> audits(measures);
    std::vector<std::function<void()>> tasks;
    for (int j = 0; j < measures; ++j)
        tasks.push_back([&, j] {
            Rng rng(cfg.seed * 7919 + 31 * j + 11);
            const SignedMeasure mu = random_curvature_measure(rng);
            const int nn = grid + 1;
            const double h = 2.0 / grid;
            const ConformalField f = ConformalField::sample(
                nn, nn, h, {-1.0, -1.0}, [&](Vec2 p) { return eval_potential(mu, p); },
                ConformalField::Domain::Disk);
            std::vector<std::pair<Vec2, double>> pts;
            for (int s = 0; s < samples; ++s) {
                const double ang = rng.uniform(0.0, kTwoPi);
                const double rad = 0.35 * std::sqrt(rng.uniform());
                pts.push_back({{rad * std::cos(ang), rad * std::sin(ang)},
                               rng.uniform(0.08, 0.3)});
            }
            const AreaBoundReport rep = area_bound_audit(f, mu, pts, margin);
            audits[j] = {rep.worst_ratio, rep.bound, rep.all_pass && rep.conclusive,
                         rep.unclipped};
        });

    // Linear-field counterexample: u_k = k x^1, finite-difference gradient,
    // masked integral over D_{1/2}.
    std::vector<double> counter(ks.size());
    for (size_t i = 0; i < ks.size(); ++i)
        tasks.push_back([&, i] {
            const double k = ks[i];
            const int n = cgrid;
            const double h = 1.0 / n;
            auto u = [&](double x, double) { return k * x; };
            double acc = 0.0;
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const double x = -0.5 + (ix + 0.5) * h, y = -0.5 + (iy + 0.5) * h;
                    if (x * x + y * y > 0.25) continue;
                    const double gx = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
                    const double gy = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
                    acc += std::hypot(gx, gy) * h * h;
                }
            counter[i] = acc;
        });
    run_tasks(tasks, cfg.jobs);

    std::vector<ResultRow> rows;
    for (int j = 0; j < measures; ++j)
        rows.push_back(make_row(sec, {{"check", "area-bound"}, {"measure", std::to_string(j)}},
                                audits[j].worst, audits[j].bound, audits[j].pass));
    for (size_t i = 0; i < ks.size(); ++i) {
        const double exact = ks[i] * M_PI / 4.0;
        rows.push_back(make_row(sec, {{"check", "linear-growth"}, {"k", fmt(ks[i])}}, counter[i],
                                exact, std::abs(counter[i] / exact - 1.0) <= 0.01));
    }
    if (ks.size() >= 2) {
        double lo = counter[0] / ks[0], hi = lo;
        for (size_t i = 1; i < ks.size(); ++i) {
            lo = std::min(lo, counter[i] / ks[i]);
            hi = std::max(hi, counter[i] / ks[i]);
        }
        rows.push_back(make_row(sec, {{"check", "linear-growth-spread"}}, hi / lo, 1.01,
                                hi / lo <= 1.01));
    }
    return rows;
}

// ------------------------------------------------------------------- blowup

std::vector<ResultRow> run_blowup(const ExperimentConfig& cfg) {
    const std::string sec = "blowup";
    auto Rs = parse_list(sec, "R", cfg.get(sec, "R", "10,100,1000"));
    const double a = parse_double(sec, "a", cfg.get(sec, "a", "0.1"));
    const int n_theta = parse_int(sec, "n_theta", cfg.get(sec, "n_theta", "4096"));
    const int n_r = parse_int(sec, "n_r", cfg.get(sec, "n_r", "2048"));

    if (!(a > 0.0 && a < M_PI / 2.0)) config_error(sec, "a", "a in (0, pi/2) required");
    if (n_theta < 16 || n_r < 16) config_error(sec, "n_theta", "quadrature sizes >= 16 required");
    for (double R : Rs)
        if (!(R > 0.0)) config_error(sec, "R", "R > 0 required");
    std::sort(Rs.begin(), Rs.end());

    std::vector<ResultRow> rows;
    if (Rs.empty()) return rows;

    std::vector<double> closed(Rs.size());
    double quad_min = 0.0;
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < Rs.size(); ++i)
        tasks.push_back([&, i] {
            if (i == 0) {
                const BlowupArea ba = blowup_area(Rs[i], a, n_theta, n_r);
                closed[i] = ba.closed;
                quad_min = ba.quadrature;
            } else {
                closed[i] = blowup_area(Rs[i], a, n_theta, 16).closed;
            }
        });
    run_tasks(tasks, cfg.jobs);

    const double rel = std::abs(closed[0] - quad_min) / closed[0];
    rows.push_back(make_row(sec, {{"check", "quadrature"}, {"R", fmt(Rs[0])}}, rel, 0.005,
                            rel <= 0.005));

    double prev = 0.0;
    for (size_t i = 0; i < Rs.size(); ++i) {
        const double ratio = closed[i] / (M_PI * Rs[i] * Rs[i]);
        rows.push_back(make_row(sec, {{"check", "area-ratio"}, {"R", fmt(Rs[i])}}, ratio, prev,
                                ratio > prev));
        prev = ratio;
    }

    // Remainder after the R^2 log R and R^2 terms; their coefficients come
    // from the theta-integrals of cos and (cos log cos)/2 - 1/4.
    const double half = M_PI / 2.0 - a;
    double c2 = 0.0;
    const int nq = 1 << 16;
    const double dth = 2.0 * half / nq;
    for (int i = 0; i < nq; ++i) {
        const double c = std::cos(-half + (i + 0.5) * dth);
        c2 += (0.5 * std::log(c) - 0.25) * dth;
    }
    const double lead = half;
    std::vector<double> kappas;
    for (size_t i = 0; i < Rs.size(); ++i) {
        if (Rs[i] < 10.0) continue;
        const double lg = std::log(Rs[i]);
        const double kappa =
            std::abs(closed[i] - lead * Rs[i] * Rs[i] * lg - c2 * Rs[i] * Rs[i]) / (Rs[i] * lg);
        kappas.push_back(kappa);
        rows.push_back(
            make_row(sec, {{"check", "remainder-kappa"}, {"R", fmt(Rs[i])}}, kappa, 0.0, true));
    }
    if (kappas.size() >= 2) {
        const auto [lo, hi] = std::minmax_element(kappas.begin(), kappas.end());
        rows.push_back(make_row(sec, {{"check", "remainder-kappa-spread"}}, *hi / *lo, 2.0,
                                *hi / *lo < 2.0));
    }
    return rows;
}

// -------------------------------------------------------------------- torus

std::vector<ResultRow> run_torus(const ExperimentConfig& cfg) {
    const std::string sec = "torus";
    const auto bs = parse_list(sec, "b", cfg.get(sec, "b", "1,4,16"));
    const auto rs = parse_list(sec, "r", cfg.get(sec, "r", "0.05,0.1,0.25,0.5,1,2,3"));
    const int N = parse_int(sec, "N", cfg.get(sec, "N", "256"));
    const double p = parse_double(sec, "p", cfg.get(sec, "p", "1.5"));
    const double spread_bound =
        parse_double(sec, "spread_bound", cfg.get(sec, "spread_bound", "10"));

    for (double b : bs)
        if (!(b >= 1.0)) config_error(sec, "b", "b >= 1 required");
    for (double r : rs)
        if (!(r > 0.0)) config_error(sec, "r", "r > 0 required");
    if (N < 8 || (N & (N - 1)) != 0) config_error(sec, "N", "N must be a power of two >= 8");
    if (!(p >= 1.0 && p < 2.0)) config_error(sec, "p", "p in [1,2) required");
    if (!(spread_bound > 1.0)) config_error(sec, "spread_bound", "spread_bound > 1 required");

    std::vector<ResultRow> rows;
    if (bs.empty() || rs.empty()) return rows;

    DegenerateFamilyReport l1, lp;
    std::vector<std::function<void()>> tasks;
    tasks.push_back([&] { l1 = degenerate_family_audit(bs, 1.0, rs, N); });
    tasks.push_back([&] { lp = degenerate_family_audit(bs, p, rs, N); });
    run_tasks(tasks, cfg.jobs);

    const double tv = 2.0;  // balanced unit dipole
    for (const auto& row : l1.rows)
        rows.push_back(make_row(sec, {{"check", "l1"}, {"b", fmt(row.b)}, {"r", fmt(row.r)}},
                                row.normalized / tv, 0.0, true));
    {
        const double spread = l1.spread();
        rows.push_back(make_row(sec, {{"check", "l1-spread"}}, spread, spread_bound,
                                spread > 0.0 && spread <= spread_bound));
    }
    for (const auto& row : lp.rows)
        rows.push_back(make_row(
            sec, {{"check", "lp"}, {"b", fmt(row.b)}, {"p", fmt(p)}, {"r", fmt(row.r)}},
            row.normalized, 0.0, true));
    {
        const double spread = lp.spread();
        rows.push_back(make_row(sec, {{"check", "lp-spread"}, {"p", fmt(p)}}, spread,
                                spread_bound, spread > 0.0 && spread <= spread_bound));
    }
    return rows;
}

// ------------------------------------------------------------------- collar

double collar_distance_quadrature(const CollarParams& p, double t1, double t2) {
    // Composite Gauss-Legendre 8 on 256 panels; oracle for the closed form.
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    const int panels = 256;
    const double hw = (t2 - t1) / panels / 2.0;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double mid = t1 + (2 * i + 1) * hw;
        for (int j = 0; j < 4; ++j) {
            acc += ws[j] * p.lambda / std::cos(p.lambda * (mid - hw * xs[j]));
            acc += ws[j] * p.lambda / std::cos(p.lambda * (mid + hw * xs[j]));
        }
    }
    return acc * hw;
}

struct CollarResiduals {
    double w = 0.0, T = 0.0, d = 0.0, sinhr = 0.0;
};

CollarResiduals collar_asymptotic_residuals(double l) {
    const CollarParams p = collar_from_length(l);
    const double t = M_PI * (M_E - 1.0);  // limit distance is exactly 1 here
    CollarResiduals res;
    res.w = std::abs(p.w - std::log(4.0 / l));
    res.T = std::abs(p.T - (M_PI * M_PI / l - M_PI));
    res.d = std::abs(collar_distance(p, p.T - t, p.T) - 1.0);
    res.sinhr = std::abs(std::sinh(injectivity_radius_profile(p, t)) - M_PI / (M_PI + t));
    return res;
}

std::vector<ResultRow> run_collar(const ExperimentConfig& cfg) {
    const std::string sec = "collar";
    const auto ls = parse_list(sec, "l", cfg.get(sec, "l", "0.1,0.01,0.001,0.0001"));
    const int n_samples =
        parse_int(sec, "ratio_samples", cfg.get(sec, "ratio_samples", "10000"));
    const double sigma = parse_double(sec, "sigma", cfg.get(sec, "sigma", "0.05"));
    const std::string strips_text = cfg.get(sec, "strips", "2:4,4:8,10:20");

    const double lmax_allowed = 2.0 * std::asinh(1.0);
    for (double l : ls)
        if (!(l > 0.0 && l < lmax_allowed))
            config_error(sec, "l", "need 0 < l < 2 arcsinh 1");
    if (n_samples < 1) config_error(sec, "ratio_samples", "ratio_samples >= 1 required");
    if (!(sigma > 0.0)) config_error(sec, "sigma", "sigma > 0 required");
    std::vector<std::pair<int, int>> strips;
    for (const auto& tok : split(strips_text, ',')) {
        const auto c = tok.find(':');
        if (c == std::string::npos) config_error(sec, "strips", "want k:m pairs");
        const int k = parse_int(sec, "strips", trim(tok.substr(0, c)));
        const int m = parse_int(sec, "strips", trim(tok.substr(c + 1)));
        if (!(k < m)) config_error(sec, "strips", "need k < m");
        strips.push_back({k, m});
    }

    std::vector<ResultRow> rows;
    if (ls.empty()) return rows;

    // Fit the asymptotic-residual slope once at the coarsest length; finer
    // lengths must stay under kappa * l (the residuals are in fact O(l^2),
    // so the fitted slope has slack).
    const double l_fit = *std::max_element(ls.begin(), ls.end());
    const CollarResiduals fit = collar_asymptotic_residuals(l_fit);
    const double kw = std::max(fit.w / l_fit, 1e-12), kT = std::max(fit.T / l_fit, 1e-12);
    const double kd = std::max(fit.d / l_fit, 1e-12),
                 kr = std::max(fit.sinhr / l_fit, 1e-12);

    struct PerL {
        double quad_err = 0.0;
        CollarResiduals res;
        double worst_ratio = 0.0;
        bool ratio_pass = false;
        std::vector<double> strip_ratios, strip_linear;
        bool monotone = true;
    };
    std::vector<PerL> out(ls.size());
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < ls.size(); ++i)
        tasks.push_back([&, i] {
            const double l = ls[i];
            const CollarParams p = collar_from_length(l);
            PerL& o = out[i];
            const double t1 = -0.5 * p.T, t2 = 0.5 * p.T;
            o.quad_err =
                std::abs(collar_distance(p, t1, t2) - collar_distance_quadrature(p, t1, t2));
            o.res = collar_asymptotic_residuals(l);

            Rng rng(cfg.seed * 4099 + 17 * i + 3);
            std::vector<std::pair<double, double>> samples;
            samples.reserve(n_samples);
            while (int(samples.size()) < n_samples) {
                const double a = rng.uniform(-(p.T - 1.0), p.T - 1.0);
                const double b = a + rng.uniform(-2.0, 2.0);
                if (std::abs(b) < p.T - 1.0 && std::abs(b - a) < 2.0) samples.push_back({a, b});
            }
            const RatioBoundReport rep = ratio_bound_audit(p, samples);
            o.worst_ratio = std::max(rep.max_ratio, 1.0 / rep.min_ratio);
            o.ratio_pass = rep.all_pass && rep.flagged == 0 && rep.evaluated == n_samples;

            const CylinderPotential cp(p, 0.0, 0.0, sigma);
            for (const auto& [k, m] : strips) {
                if (!(-p.T + 2.0 < k && m < p.T - 2.0)) continue;
                const StripGradientReport sg = collar_strip_gradient_audit(
                    p, [&](double t, double th) { return cp.gradient(t, th); }, k, m);
                o.strip_ratios.push_back(sg.ratio);
                o.monotone = o.monotone && sg.lengths_monotone;
                const StripGradientReport lin = collar_strip_gradient_audit(
                    p, [](double, double) { return Vec2{1.0, 0.0}; }, k, m);
                o.strip_linear.push_back(lin.ratio);
            }
        });
    run_tasks(tasks, cfg.jobs);

    std::vector<double> all_strip_ratios;
    for (size_t i = 0; i < ls.size(); ++i) {
        const PerL& o = out[i];
        const std::string lf = fmt(ls[i]);
        rows.push_back(make_row(sec, {{"check", "distance-quadrature"}, {"l", lf}}, o.quad_err,
                                1e-8, o.quad_err <= 1e-8));
        const std::pair<const char*, std::pair<double, double>> asym[] = {
            {"w", {o.res.w, kw}},
            {"T", {o.res.T, kT}},
            {"d", {o.res.d, kd}},
            {"sinh-r", {o.res.sinhr, kr}}};
        for (const auto& [name, rv] : asym)
            rows.push_back(make_row(sec,
                                    {{"check", "asymptotic"}, {"l", lf}, {"name", name}},
                                    rv.first, rv.second * ls[i],
                                    rv.first <= rv.second * ls[i] * (1.0 + 1e-9)));
        rows.push_back(make_row(sec, {{"check", "ratio-bound"}, {"l", lf}}, o.worst_ratio,
                                std::exp(2.0), o.ratio_pass));
        for (size_t s = 0; s < o.strip_ratios.size(); ++s) {
            const auto& [k, m] = strips[s];
            rows.push_back(make_row(sec,
                                    {{"check", "strip"},
                                     {"l", lf},
                                     {"k", std::to_string(k)},
                                     {"m", std::to_string(m)}},
                                    o.strip_ratios[s], 0.0, o.monotone));
            all_strip_ratios.push_back(o.strip_ratios[s]);
            rows.push_back(make_row(sec,
                                    {{"check", "strip-linear"},
                                     {"l", lf},
                                     {"k", std::to_string(k)},
                                     {"m", std::to_string(m)}},
                                    o.strip_linear[s], kTwoPi,
                                    std::abs(o.strip_linear[s] / kTwoPi - 1.0) <= 1e-3));
        }
    }
    if (all_strip_ratios.size() >= 2) {
        const auto [lo, hi] =
            std::minmax_element(all_strip_ratios.begin(), all_strip_ratios.end());
        rows.push_back(make_row(sec, {{"check", "strip-spread"}}, *hi / *lo, 10.0,
                                *lo > 0.0 && *hi / *lo <= 10.0));
    }
    return rows;
}

// ------------------------------------------------------------------ annulus

std::vector<ResultRow> run_annulus(const ExperimentConfig& cfg) {
    const std::string sec = "annulus";
    const auto ps = parse_list(sec, "p", cfg.get(sec, "p", "1,1.5,1.9"));
    const auto as = parse_list(sec, "a", cfg.get(sec, "a", "0,0.25,0.0625"));
    const double pdb =
        parse_double(sec, "per_disk_bound", cfg.get(sec, "per_disk_bound", "1"));

    for (double p : ps)
        if (!(p >= 1.0 && p < 2.0)) config_error(sec, "p", "p in [1,2) required");
    for (double a : as) {
        if (!(a >= 0.0 && a <= 0.25)) config_error(sec, "a", "a in [0, 1/4] required");
        if (a > 0.0 && std::abs(std::log2(a) - std::round(std::log2(a))) > 1e-12)
            config_error(sec, "a", "a must be a power of two (or 0)");
    }
    if (!(pdb > 0.0)) config_error(sec, "per_disk_bound", "per_disk_bound > 0 required");

    std::vector<ResultRow> rows;
    for (double p : ps)
        for (double a : as) {
            const double v = annulus_estimate_audit(a, p, pdb);
            const bool anchor = (p == 1.0 && a == 0.0);
            rows.push_back(make_row(sec, {{"check", "assembly"}, {"a", fmt(a)}, {"p", fmt(p)}},
                                    v, anchor ? pdb : 0.0,
                                    std::isfinite(v) && (!anchor || v == pdb)));
        }
    if (!ps.empty() && !as.empty()) {
        bool rejected = false;
        try {
            annulus_estimate_audit(0.0, 2.0, pdb);
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        rows.push_back(
            make_row(sec, {{"check", "rejects-p-2"}}, rejected ? 1.0 : 0.0, 1.0, rejected));
    }
    return rows;
}

}  // namespace

std::string ExperimentConfig::get(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    const auto s = sections.find(section);
    if (s == sections.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    ExperimentConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected [section] or key = value");
        cfg.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    if (auto it = cfg.sections.find("run"); it != cfg.sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "kind")
                cfg.kind = v;
            else if (k == "seed")
                cfg.seed = std::stoull(v);
            else if (k == "jobs")
                cfg.jobs = parse_int("run", "jobs", v);
            else if (k == "out")
                cfg.out_path = v;
            else
                config_error("run", k, "unknown key");
        }
    }
    static const std::set<std::string> known = {"run",    "potential", "disk-area",
                                                "blowup", "torus",     "collar",
                                                "annulus"};
    for (const auto& [name, kv] : cfg.sections)
        if (!known.count(name)) config_error(name, "", "unknown section");
    return cfg;
}

std::vector<ResultRow> run(const ExperimentConfig& config) {
    using Runner = std::vector<ResultRow> (*)(const ExperimentConfig&);
    static const std::vector<std::pair<std::string, Runner>> runners = {
        {"potential", run_potential}, {"disk-area", run_disk_area}, {"blowup", run_blowup},
        {"torus", run_torus},         {"collar", run_collar},       {"annulus", run_annulus}};
    if (config.jobs < 1) throw std::invalid_argument("config [run] jobs: jobs >= 1 required");

    std::vector<ResultRow> rows;
    bool found = false;
    for (const auto& [name, fn] : runners) {
        if (config.kind != "all" && config.kind != name) continue;
        found = true;
        const double t0 = now_ms();
        std::vector<ResultRow> part = fn(config);
        const double dt = part.empty() ? 0.0 : (now_ms() - t0) / part.size();
        for (auto& r : part) r.ms = dt;
        rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
    }
    if (!found)
        throw std::invalid_argument("config: unknown experiment kind '" + config.kind + "'");
    return rows;
}

bool all_pass(const std::vector<ResultRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.pass; });
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out, bool with_timing) {
    std::set<std::string> keys;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.params) keys.insert(k);
    out << "experiment";
    for (const auto& k : keys) out << ",param." << k;
    out << ",value,bound,pass,ms\n";
    for (const auto& r : rows) {
        out << r.experiment;
        for (const auto& k : keys) {
            out << ',';
            for (const auto& [pk, pv] : r.params)
                if (pk == k) out << pv;
        }
        out << ',' << fmt(r.value) << ',' << fmt(r.bound) << ',' << (r.pass ? 1 : 0) << ','
            << (with_timing ? fmt(r.ms) : "0") << '\n';
    }
}

std::string report(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    size_t passed = 0;
    for (const auto& r : rows) {
        out << (r.pass ? "  ok   " : "  FAIL ") << r.experiment;
        for (const auto& [k, v] : r.params) out << ' ' << k << '=' << v;
        out << "  value=" << fmt(r.value) << " bound=" << fmt(r.bound) << '\n';
        if (r.pass) ++passed;
    }
    out << (passed == rows.size() ? "PASS " : "FAIL ") << passed << '/' << rows.size() << '\n';
    return out.str();
}

void write_plot_data(const std::vector<ResultRow>& rows, std::ostream& out) {
    // One gnuplot index per (experiment, check); x is the first numeric
    // parameter other than the check tag, y is the value.
    std::string block;
    bool first = true;
    for (const auto& r : rows) {
        std::string tag = r.experiment;
        for (const auto& [k, v] : r.params)
            if (k == "check") tag += "/" + v;
        if (tag != block) {
            if (!first) out << "\n\n";
            out << "# " << tag << "\n";
            block = tag;
            first = false;
        }
        double x = 0.0;
        for (const auto& [k, v] : r.params) {
            if (k == "check") continue;
            try {
                size_t pos = 0;
                x = std::stod(v, &pos);
                if (pos == v.size()) break;
            } catch (const std::exception&) {
            }
        }
        out << fmt(x) << ' ' << fmt(r.value) << '\n';
    }
}

double weak_solution_residual(const SignedMeasure& mu, std::uint64_t bump_seed, int n,
                              double L) {
    Rng rng(bump_seed);
    const Vec2 c{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const double s2 = std::pow(rng.uniform(0.3, 0.5), 2);
    auto phi = [&](Vec2 x) { return std::exp(-0.5 * norm2(x - c) / s2); };
    auto lap_phi = [&](Vec2 x) {
        const double d2 = norm2(x - c);
        return phi(x) * (d2 / (s2 * s2) - 2.0 / s2);
    };
    const double h = 2.0 * L / n;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        double rowacc = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 x{-L + (ix + 0.5) * h, -L + (iy + 0.5) * h};
            rowacc += eval_potential(mu, x) * lap_phi(x);
        }
        acc += rowacc;
    }
    acc *= h * h;
    double pairing = 0.0;
    for (const auto& a : mu.atoms()) pairing += a.weight * phi(a.pos);
    if (mu.density())
        for (int iy = 0; iy < mu.density()->ny; ++iy)
            for (int ix = 0; ix < mu.density()->nx; ++ix)
                pairing += mu.density()->at(ix, iy) * mu.density()->cell_area() *
                           phi(mu.density()->cell_center(ix, iy));
    return std::abs(acc + pairing);  // ||phi||_inf = 1 by construction
}

}  // namespace gradlab
