// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Criterion 3's doubling cap is asserted exactly as stated
// over R in {1, 2, 4}; see the README for the analysis of its status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gradlab/collar.hpp"
#include "gradlab/disk_geometry.hpp"
#include "gradlab/harness.hpp"
#include "gradlab/log_potential.hpp"
#include "gradlab/measure.hpp"

using namespace gradlab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int failures = 0;

void verdict(int n, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d: %s  %s  [%s]\n", n, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig base_config(const std::string& kind, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.seed = seed;
    cfg.jobs = 4;
    return cfg;
}

bool rows_pass(const std::vector<ResultRow>& rows, const std::string& check) {
    bool found = false;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.params)
            if (k == "check" && v == check) {
                found = true;
                if (!r.pass) return false;
            }
    return found;
}

// 1. Weak-solution identity for mu = delta_0 against random Gaussian bumps.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        worst = std::max(worst, weak_solution_residual(mu, 1000 + i, 1024));
    const double dt = seconds_since(t0);
    std::ostringstream d;
    d << "worst residual " << worst << ", " << dt << " s";
    verdict(1, worst <= 1e-3 && dt < 10.0, "weak-solution residual <= 1e-3 on 1024^2 in < 10 s",
            d.str());
}

// 2. Scale invariance of the gradient scaling functional.
void criterion_2() {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    bool pass = true;
    std::ostringstream d;
    for (double q : {1.0, 1.5}) {
        const double v01 = scaling_functional(mu, {0, 0}, 0.1, q);
        const double v1 = scaling_functional(mu, {0, 0}, 1.0, q);
        const double v10 = scaling_functional(mu, {0, 0}, 10.0, q);
        pass = pass && std::abs(v01 - v1) <= 1e-6 && std::abs(v10 - v1) <= 1e-6;
        if (q == 1.0) {
            pass = pass && std::abs(v1 - 1.0) <= 1e-4;
            d << "q=1 value " << v1 << "; ";
        }
        d << "q=" << q << " spread " << std::max(std::abs(v01 - v1), std::abs(v10 - v1)) << "; ";
    }
    verdict(2, pass, "scaling functional invariant across r, q=1 anchor = 1", d.str());
}

// 3. Exponential-integrability growth cap over R in {1, 2, 4}.
void criterion_3() {
    const SignedMeasure mu({{{0.0, 0.0}, 1.0}});
    const double eps = kTwoPi;  // 2 pi
    const double v1 = exp_integrability(mu, 1.0, eps);
    const double v2 = exp_integrability(mu, 2.0, eps);
    const double v4 = exp_integrability(mu, 4.0, eps);
    const double cap = std::pow(2.0, eps / kTwoPi) * 1.05;
    const bool anchor = std::abs(v1 / kTwoPi - 1.0) <= 0.01;
    const bool growth = (v2 / v1 <= cap) && (v4 / v2 <= cap);
    std::ostringstream d;
    d << "value(1)=" << v1 << " (2pi=" << kTwoPi << "), ratios " << v2 / v1 << ", " << v4 / v2
      << " vs cap " << cap;
    verdict(3, anchor && growth, "exp-integrability doubling cap over R in {1,2,4}", d.str());
}

// 4. Geodesic-ball area bound audit over 20 random curvature measures.
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = base_config("disk-area", 2026);
    cfg.sections["disk-area"] = {{"measures", "20"}, {"grid", "512"}, {"samples", "3"},
                                 {"k", ""}};
    const auto rows = run(cfg);
    const double dt = seconds_since(t0);
    const bool pass = rows_pass(rows, "area-bound") && dt < 120.0;
    std::ostringstream d;
    d << rows.size() << " measures audited, " << dt << " s";
    verdict(4, pass, "ball-area ratios within 1 + K^-/(2pi) + 0.05 at 512^2 in < 2 min",
            d.str());
}

// 5. Blow-up example: closed form vs quadrature, growth, remainder order.
void criterion_5() {
    ExperimentConfig cfg = base_config("blowup", 1);
    const auto rows = run(cfg);
    const bool pass = rows_pass(rows, "quadrature") && rows_pass(rows, "area-ratio") &&
                      rows_pass(rows, "remainder-kappa-spread");
    std::ostringstream d;
    for (const auto& r : rows)
        if (!r.params.empty() && r.params[0].second == "remainder-kappa-spread")
            d << "kappa spread " << r.value;
    verdict(5, pass, "blow-up area: 0.5% agreement, increasing ratio, O(R log R) remainder",
            d.str());
}

// 6. Flat-torus gradient functionals uniform across the degenerating family.
void criterion_6() {
    ExperimentConfig cfg = base_config("torus", 1);
    const auto rows = run(cfg);
    std::ostringstream d;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.params)
            if (k == "check" && (v == "l1-spread" || v == "lp-spread"))
                d << v << "=" << r.value << " ";
    verdict(6, rows_pass(rows, "l1-spread") && rows_pass(rows, "lp-spread"),
            "torus dipole functionals within one decade across b in {1,4,16}", d.str());
}

// 7. Collar closed forms, asymptotics, and the C0 = e^2 ratio bound.
void criterion_7() {
    ExperimentConfig cfg = base_config("collar", 1);
    cfg.sections["collar"]["strips"] = "";  // strips are not part of this criterion
    const auto rows = run(cfg);
    const bool pass = rows_pass(rows, "distance-quadrature") && rows_pass(rows, "asymptotic") &&
                      rows_pass(rows, "ratio-bound");
    verdict(7, pass,
            "collar distance to 1e-8, four asymptotics O(l), 1e4 ratio samples per l",
            std::to_string(rows.size()) + " rows");
}

// 8. Dyadic assembly bound anchors and rejection.
void criterion_8() {
    bool pass = annulus_estimate_audit(0.0, 1.0, 1.0) == 1.0;
    for (double p : {1.1, 1.5, 1.9, 1.99})
        pass = pass && std::isfinite(annulus_estimate_audit(0.0, p, 1.0));
    bool rejected = false;
    try {
        annulus_estimate_audit(0.0, 2.0, 1.0);
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    verdict(8, pass && rejected, "dyadic assembly: exact p=1 anchor, finite p<2, rejects p>=2",
            rejected ? "p=2 rejected" : "p=2 NOT rejected");
}

// 9. Linear-field counterexample: L1 gradient norm grows linearly in k.
void criterion_9() {
    ExperimentConfig cfg = base_config("disk-area", 1);
    cfg.sections["disk-area"] = {{"measures", "0"}, {"k", "1,2,4,8"}};
    const auto rows = run(cfg);
    verdict(9, rows_pass(rows, "linear-growth") && rows_pass(rows, "linear-growth-spread"),
            "grad(k x1) has L1(D_1/2) norm k pi/4, linear in k", "k in {1,2,4,8}");
}

// 10. Byte-identical CSV from repeated fixed-seed `all` runs of the CLI.
void criterion_10(const char* cli) {
    if (!cli) {
        verdict(10, false, "determinism (CLI path not supplied)", "");
        return;
    }
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string f1 = "acceptance_run1.csv", f2 = "acceptance_run2.csv";
    const std::string base = std::string("\"") + cli + "\" all --seed 123 --jobs 4 --out ";
    const int rc1 = std::system((base + f1 + " > /dev/null").c_str());
    const int rc2 = std::system((base + f2 + " > /dev/null").c_str());
    const std::string a = slurp(f1), b = slurp(f2);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
    std::remove((f1 + ".dat").c_str());
    std::remove((f2 + ".dat").c_str());
    const bool pass = rc1 == rc2 && !a.empty() && a == b;
    std::ostringstream d;
    d << a.size() << " bytes vs " << b.size() << " bytes";
    verdict(10, pass, "repeated fixed-seed `all` runs emit byte-identical CSV", d.str());
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(argc > 1 ? argv[1] : nullptr);
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
