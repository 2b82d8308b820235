// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "geomwork/cycles.hpp"
#include "geomwork/dynamics.hpp"
#include "geomwork/geometry.hpp"
#include "geomwork/parallel.hpp"
#include "geomwork/ssh.hpp"
#include "geomwork/steadystate.hpp"
#include "oracles.hpp"

using namespace geomwork;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

const std::size_t kThreads = default_thread_count();
const std::vector<double> kSweep{0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// 1. generic null-space steady state vs the closed-form Bloch vector
Outcome closed_form_equivalence() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> delta(-3.0, 3.0), omega(0.05, 3.0), gamma(0.1, 2.0),
        gphi(0.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double d = delta(rng), o = omega(rng), g = gamma(rng), gp = gphi(rng);
        const BlochVector generic = bloch_components(steady_state(tls_model(g, gp), {d, o}));
        const BlochVector exact = tls_steady_closed_form(d, o, g, gp);
        worst = std::max({worst, std::abs(generic.x - exact.x), std::abs(generic.y - exact.y),
                          std::abs(generic.z - exact.z)});
    }
    return {worst <= 1e-8, "max |dBloch| = " + sci(worst) + " (<= 1e-8, 500 points)"};
}

// 2. finite-difference curvature vs closed form, and its h² convergence
Outcome curvature_oracle() {
    const LindbladModel model = tls_model(1.0, 0.2);
    const GridSpec grid{{-3.0, 3.0, 30}, {0.05, 3.0, 30}};
    const CurvatureField exact = curvature_field(model, grid, CurvatureMethod::closed_form);
    const CurvatureField fd1 =
        curvature_field(model, grid, CurvatureMethod::finite_difference, 1e-3, kThreads);
    const CurvatureField fd2 =
        curvature_field(model, grid, CurvatureMethod::finite_difference, 5e-4, kThreads);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!exact.values[k] || !fd1.values[k] || !fd2.values[k]) return {false, "missing node"};
        e1 = std::max(e1, std::abs(*fd1.values[k] - *exact.values[k]));
        e2 = std::max(e2, std::abs(*fd2.values[k] - *exact.values[k]));
    }
    const double ratio = e1 / e2;
    const bool pass = e1 <= 1e-5 && ratio >= 3.5 && ratio <= 4.5;
    return {pass, "max err(h=1e-3) = " + sci(e1) + " (<= 1e-5), err(h)/err(h/2) = " +
                      sci(ratio) + " (4 +/- 0.5)"};
}

// 3. line integral of the generic one-form vs closed-form flux
Outcome stokes_consistency() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> cd(-1.4, 1.4), co(0.8, 1.4), radius(0.1, 0.55),
        gphi(0.0, 2.0);
    std::vector<Cycle> cycles;
    std::vector<double> rates;
    for (int i = 0; i < 10; ++i) {
        cycles.push_back(Cycle::circle({cd(rng), co(rng)}, {radius(rng), radius(rng)},
                                       i % 2 ? Orientation::negative : Orientation::positive));
        rates.push_back(gphi(rng));
    }
    for (int i = 0; i < 5; ++i) {
        const Eigen::Vector2d lo{cd(rng), co(rng) - 0.5};
        cycles.push_back(Cycle::rectangle(lo, lo + Eigen::Vector2d{radius(rng), radius(rng)} * 2.0));
        rates.push_back(gphi(rng));
    }
    std::vector<double> excess(cycles.size());
    parallel_for(cycles.size(), kThreads, [&](std::size_t i) {
        const LindbladModel model = tls_model(1.0, rates[i]);
        const double line = line_integral_work(model, cycles[i], 1024);
        const double flux = flux_work(model, cycles[i], 64, {CurvatureMethod::closed_form});
        excess[i] = std::abs(line - flux) / std::max(1e-6, 1e-3 * std::abs(flux));
    });
    const double worst = *std::max_element(excess.begin(), excess.end());
    return {worst <= 1.0, "max |line - flux| / max(1e-6, 1e-3|W|) = " + sci(worst) +
                              " (<= 1, 10 circles + 5 rectangles)"};
}

struct LoopTable {
    // w[g][loop] for loops A, B, C across kSweep
    std::vector<std::array<double, 3>> w;
};

LoopTable loop_table() {
    LoopTable t;
    t.w.resize(kSweep.size());
    parallel_for(kSweep.size() * 3, kThreads, [&](std::size_t idx) {
        const std::size_t g = idx / 3, l = idx % 3;
        t.w[g][l] = line_integral_work(tls_model(1.0, kSweep[g]),
                                       default_loop(static_cast<char>('A' + l)), 1024);
    });
    return t;
}

// 4. W(C) + W(C⁻¹) = 0
Outcome orientation_antisymmetry() {
    std::vector<double> residual(kSweep.size() * 3);
    parallel_for(residual.size(), kThreads, [&](std::size_t idx) {
        const LindbladModel model = tls_model(1.0, kSweep[idx / 3]);
        const Cycle c = default_loop(static_cast<char>('A' + idx % 3));
        residual[idx] = std::abs(line_integral_work(model, c, 1024) +
                                 line_integral_work(model, reverse(c), 1024));
    });
    const double worst = *std::max_element(residual.begin(), residual.end());
    return {worst <= 1e-10, "max |W + W_rev| = " + sci(worst) + " (<= 1e-10, loops A,B,C x 8 rates)"};
}

// 5. loop C cancels; B dominates A without dephasing
Outcome loop_c_cancellation() {
    const LoopTable t = loop_table();
    double worst_c = 0.0;
    for (const auto& row : t.w) worst_c = std::max(worst_c, std::abs(row[2]));
    const double ratio = std::abs(t.w[0][1]) / std::abs(t.w[0][0]);
    return {worst_c <= 1e-6 && ratio > 10.0,
            "max |W_C| = " + sci(worst_c) + " (<= 1e-6), |W_B|/|W_A| at gphi=0 = " + sci(ratio) +
                " (> 10)"};
}

// 6. log-log slopes against Γ₂ at (Δ, Ω, γ) = (0.5, 0.8, 1)
Outcome dephasing_scaling() {
    std::vector<double> g2, F, X, Y;
    for (double e = 2.0; e <= 4.0 + 1e-12; e += 0.5) {
        const double G = std::pow(10.0, e);
        const double gp = G - 0.5;
        g2.push_back(G);
        F.push_back(curvature_closed_form_tls(0.5, 0.8, 1.0, gp));
        const BlochVector b = bloch_components(steady_state(tls_model(1.0, gp), {0.5, 0.8}));
        X.push_back(b.x);
        Y.push_back(b.y);
    }
    const double sF = oracle::loglog_slope(g2, F);
    const double sX = oracle::loglog_slope(g2, X);
    const double sY = oracle::loglog_slope(g2, Y);
    const bool pass = std::abs(sF + 2.0) <= 0.1 && std::abs(sX + 1.0) <= 0.1 &&
                      std::abs(sY + 1.0) <= 0.1;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "slope F = %.4f (-2 +/- 0.1), slope x = %.4f, slope y = %.4f (-1 +/- 0.1)", sF,
                  sX, sY);
    return {pass, buf};
}

// 7. loop-B work vanishes under strong dephasing, monotonically
Outcome strong_dephasing() {
    const LoopTable t = loop_table();
    bool monotone = true;
    for (std::size_t g = 1; g < t.w.size(); ++g) {
        monotone = monotone && std::abs(t.w[g][1]) < std::abs(t.w[g - 1][1]);
    }
    const double ratio = std::abs(t.w.back()[1]) / std::abs(t.w.front()[1]);
    return {ratio < 0.05 && monotone, "|W_B(50)|/|W_B(0)| = " + sci(ratio) + " (< 0.05), " +
                                          (monotone ? "monotone" : "NOT monotone")};
}

// 8. driven dynamics approaches the geometric line integral on loop B
Outcome quasistatic_validation() {
    const ConvergenceTable table = quasistatic_convergence(
        tls_model(1.0, 0.0), default_loop('B'), {1e2, 1e3, 1e4}, {1024, kThreads, {}});
    bool decreasing = true;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (!table.rows[i].abs_error) return {false, "T=" + sci(table.rows[i].period) + ": " +
                                                         table.rows[i].failure};
        if (i > 0) decreasing = decreasing && *table.rows[i].abs_error < *table.rows[i - 1].abs_error;
    }
    const double rel = *table.rows.back().abs_error / std::abs(table.w_geom);
    std::string errs;
    for (const auto& r : table.rows) errs += sci(*r.abs_error) + " ";
    return {decreasing && rel <= 0.02,
            "errors " + errs + (decreasing ? "decreasing" : "NOT decreasing") +
                ", final relative error = " + sci(rel) + " (<= 0.02)"};
}

// 9. exact differential leaves loop integrals unchanged
Outcome gauge_invariance() {
    const std::vector<ScalarField> fields{
        {[](const ControlPoint&) { return 3.7; },
         [](const ControlPoint&) { return Eigen::VectorXd::Zero(2).eval(); }},
        {[](const ControlPoint& p) { return p[0] * p[1]; },
         [](const ControlPoint& p) { return Eigen::Vector2d{p[1], p[0]}.eval(); }},
        {[](const ControlPoint& p) { return std::sin(p[0]) * std::cos(2.0 * p[1]); },
         [](const ControlPoint& p) {
             return Eigen::Vector2d{std::cos(p[0]) * std::cos(2.0 * p[1]),
                                    -2.0 * std::sin(p[0]) * std::sin(2.0 * p[1])}
                 .eval();
         }},
    };
    const LindbladModel model = tls_model(1.0, 0.2);
    double worst = 0.0;
    for (const auto& chi : fields) {
        for (char id : {'A', 'B', 'C'}) {
            worst = std::max(worst, gauge_shift_residual(model, default_loop(id), chi, 1024));
        }
    }
    return {worst <= 1e-8, "max loop-integral shift = " + sci(worst) + " (<= 1e-8, 3 fields x 3 loops)"};
}

// 10. SSH curvature vanishes at k = π
Outcome ssh_vanishing() {
    const double gamma = 1.0, gphi = 0.1;
    std::vector<double> f(100);
    parallel_for(f.size(), kThreads, [&](std::size_t idx) {
        const double t1 = 0.2 + 0.2 * static_cast<double>(idx / 10);
        const double t2 = 0.15 + 0.2 * static_cast<double>(idx % 10);
        f[idx] = std::abs(ssh_curvature(t1, t2, std::numbers::pi, gamma, gphi));
    });
    const double worst = *std::max_element(f.begin(), f.end());
    const double ref = std::abs(ssh_curvature(1.0, 0.5, std::numbers::pi / 2, gamma, gphi));
    return {worst <= 1e-6 && ref > 1e-3, "max |F(k=pi)| = " + sci(worst) +
                                             " (<= 1e-6, 10x10 grid), |F(k=pi/2)| = " + sci(ref) +
                                             " (> 1e-3)"};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"closed-form steady state equivalence", 5, closed_form_equivalence},
        {"curvature finite-difference oracle", 30, curvature_oracle},
        {"Stokes consistency", 120, stokes_consistency},
        {"orientation antisymmetry", 60, orientation_antisymmetry},
        {"loop C cancellation", 60, loop_c_cancellation},
        {"dephasing scaling", 10, dephasing_scaling},
        {"strong-dephasing vanishing", 60, strong_dephasing},
        {"quasistatic validation", 300, quasistatic_validation},
        {"gauge invariance", 30, gauge_invariance},
        {"SSH k=pi vanishing", 30, ssh_vanishing},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs < c.budget_s;
        const bool pass = o.pass && in_budget;
        failed += pass ? 0 : 1;
        std::printf("%s %2zu %-38s %s; %.2fs (budget %.0fs%s)\n", pass ? "PASS" : "FAIL", i + 1,
                    c.name, o.detail.c_str(), secs, c.budget_s, in_budget ? "" : ", EXCEEDED");
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
