// One PASS/FAIL line per acceptance criterion.  `--only N` runs a single
// criterion; the exit status is non-zero when any criterion that ran failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reference.hpp"
#include "test_util.hpp"
#include "triml/cli.hpp"
#include "triml/csv.hpp"
#include "triml/fde.hpp"
#include "triml/frac_calculus.hpp"
#include "triml/laplace.hpp"

using namespace triml;
using triml::testing::rel_err;
using triml::testing::Rng;

namespace {

const IVPSpec kWorked{0.8L, 0.6L, 0.4L, 0.5L, 3, 5, 2};

struct Verdict {
    bool pass = false;
    std::string detail;
    std::vector<std::string> notes;
};

std::string sci(Real x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3Lg", x);
    return buf;
}

// 1. E_{1,1,1,1}(u, v, w) = exp(u + v + w)
Verdict exponential_reduction() {
    const MLParams ones{1, 1, 1, 1, 1};
    Real worst = 0;
    for (int u = -2; u <= 2; ++u)
        for (int v = -2; v <= 2; ++v)
            for (int w = -2; w <= 2; ++w)
                worst = std::max(worst, rel_err(eval_trivariate(ones, u, v, w).value, Complex(std::exp(Real(u + v + w)))));
    return {worst <= 1e-10L, "max rel err " + sci(worst) + " over 125 points (tol 1e-10)"};
}

// 2. w = 0 against a double loop, v = w = 0 against the Prabhakar series
Verdict reductions() {
    Rng rng(2002);
    Real worst_bi = 0, worst_pr = 0;
    for (int i = 0; i < 200; ++i) {
        const MLParams p{rng.uniform(0.5L, 2), rng.uniform(0.5L, 2), rng.uniform(0.5L, 2), rng.uniform(0.3L, 3),
                         rng.uniform(0.3L, 2)};
        const Real u = rng.uniform(-2, 2), v = rng.uniform(-2, 2);
        const Complex bi = reference::double_sum(p.alpha, p.beta, p.delta, p.eta, u, v, 150);
        worst_bi = std::max(worst_bi, rel_err(eval_trivariate(p, u, v, 0).value, bi));
        worst_pr = std::max(worst_pr,
                            rel_err(eval_trivariate(p, u, 0, 0).value, eval_prabhakar(p.alpha, p.delta, p.eta, u).value));
    }
    return {worst_bi <= 1e-11L && worst_pr <= 1e-11L,
            "200 sets: bivariate max rel err " + sci(worst_bi) + ", Prabhakar " + sci(worst_pr) + " (tol 1e-11)"};
}

// 3. Talbot inversion of the transform against the univariate form
Verdict laplace_duality() {
    Rng rng(2003);
    Real worst = 0;
    int diverged = 0;
    for (int i = 0; i < 20; ++i) {
        MLParams p = kWorked.homogeneous_params();
        LambdaTriple lam{kWorked.lambda1, kWorked.lambda2, kWorked.lambda3};
        if (i > 0) {
            p = {rng.uniform(0.5L, 1.5L), rng.uniform(0.5L, 1.5L), rng.uniform(0.5L, 1.5L), rng.uniform(0.5L, 2.5L),
                 rng.uniform(0.5L, 2)};
            lam = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        }
        for (Real t : {0.25L, 0.5L, 0.75L, 1.0L}) {
            const TalbotResult r = invert_univariate_transform(p, lam, t);
            diverged += r.diverged;
            worst = std::max(worst, rel_err(r.value, eval_univariate(p, lam, t).real()));
        }
    }
    return {worst <= 1e-6L && diverged == 0, "20 sets x 4 times, worked set included: max rel err " + sci(worst) +
                                                  " (tol 1e-6), " + std::to_string(diverged) + " diverged"};
}

// 4. Gauss–Jacobi convolution against the closed form
Verdict convolution() {
    Rng rng(2004);
    QuadOptions opts;
    opts.panel_nodes = 10;
    opts.ratio = 0.2L;
    opts.levels = 16;
    Real worst = 0;
    for (int i = 0; i < 20; ++i) {
        const Real a = rng.uniform(0.5L, 1.5L), b = rng.uniform(0.5L, 1.5L), g = rng.uniform(0.5L, 1.5L);
        const MLParams p1{a, b, g, rng.uniform(0.5L, 2.5L), rng.uniform(0.5L, 2)};
        const MLParams p2{a, b, g, rng.uniform(0.5L, 2.5L), rng.uniform(0.5L, 2)};
        const LambdaTriple lam{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        for (Real r : {0.3L, 0.6L, 1.0L})
            worst = std::max(worst, rel_err(convolution_numeric(p1, p2, lam, r, opts).value,
                                            convolution_closed_form(p1, p2, lam, r)));
    }
    return {worst <= 1e-6L, "20 sets x 3 radii: max rel err " + sci(worst) + " (tol 1e-6)"};
}

// 5. L1 Caputo of samples against the parameter-shifted closed form
Verdict caputo_shift() {
    const MLParams p{0.9L, 1.3L, 1.7L, 2, 1};
    const LambdaTriple lam{-1, 0.5L, 0.3L};
    bool ok = true;
    std::string detail;
    for (Real nu : {0.4L, 0.8L}) {
        Real err[3];
        int idx = 0;
        for (int n : {256, 512, 1024}) {
            const GridFunction f =
                GridFunction::sample([&](Real r) { return eval_univariate(p, lam, r).real(); }, 0, 1.0L / n, n);
            const GridFunction d = caputo_l1_numeric(f, nu);
            Real e = 0;
            for (std::size_t i = 0; i < d.grid.size(); ++i)
                e = std::max(e, std::fabs(d.values[i] - caputo_derivative_univariate(p, lam, {nu, 0}, d.grid[i])));
            err[idx++] = e;
        }
        detail += (detail.empty() ? "" : "; ") + std::string("nu=") + sci(nu) + " orders";
        for (int k = 0; k < 2; ++k) {
            const Real order = std::log2(err[k] / err[k + 1]);
            ok = ok && std::fabs(order - (2 - nu)) <= 0.3L;
            detail += " " + sci(order);
        }
        detail += " (want " + sci(2 - nu) + " +- 0.3)";
    }
    return {ok, detail};
}

std::vector<Real> uniform_grid(Real t_max, int n) {
    std::vector<Real> g;
    for (int i = 0; i <= n; ++i) g.push_back(t_max * i / n);
    return g;
}

// 6. residual order of the series solution and agreement with the L1 stepper
Verdict homogeneous_solution() {
    Verdict v;
    auto study = [](Real t_max, std::string& text, Real& worst_dev, Real& abs_diff, Real& rel_diff) {
        Real res[3];
        int idx = 0;
        for (int n : {256, 512, 1024}) res[idx++] = residual_check(kWorked, solve(kWorked, {}, uniform_grid(t_max, n)));
        worst_dev = 0;
        text = "residual orders";
        for (int k = 0; k < 2; ++k) {
            const Real order = std::log2(res[k] / res[k + 1]);
            worst_dev = std::isfinite(order) ? std::max(worst_dev, std::fabs(order - (2 - kWorked.alpha)))
                                             : std::numeric_limits<Real>::infinity();
            text += " " + sci(order);
        }
        text += " (want " + sci(2 - kWorked.alpha) + " +- 0.3)";
        const SolutionTrace series = solve(kWorked, {}, uniform_grid(t_max, 1024));
        abs_diff = rel_diff = 0;
        try {
            const SolutionTrace oracle = numeric_oracle_solve(kWorked, {}, t_max / 1024, t_max);
            for (std::size_t i = 0; i < series.y.size(); ++i) {
                const Real d = std::fabs(series.y[i] - oracle.y[i]);
                abs_diff = std::max(abs_diff, d);
                rel_diff = std::max(rel_diff, d / std::max<Real>(std::fabs(series.y[i]), 1));
            }
            text += "; max|series - L1| " + sci(abs_diff) + " (relative " + sci(rel_diff) + ")";
        } catch (const SingularityError& e) {
            abs_diff = rel_diff = std::numeric_limits<Real>::infinity();
            text += std::string("; L1 stepper: ") + e.what();
        }
    };
    Real dev, abs_diff, rel_diff;
    study(1, v.detail, dev, abs_diff, rel_diff);
    v.detail = "on [0,1], h = 1/1024: " + v.detail + " (tol 1e-3)";
    v.pass = dev <= 0.3L && abs_diff <= 1e-3L;
    if (!v.pass) {
        const Real sigma = transform_abscissa(kWorked.homogeneous_params(), {0.5L, 3, 5});
        v.notes.push_back("growth rate sigma0 = " + sci(sigma) + ", so h sigma0 = " + sci(sigma / 1024) +
                          " at h = 1/1024; the L1 leading coefficient is negative at this step");
        std::string text;
        study(0.001L, text, dev, abs_diff, rel_diff);
        v.notes.push_back("same checks on [0, 0.001] (h sigma0 = " + sci(sigma * 0.001L / 1024) + "): " + text);
    }
    return v;
}

// 7. the worked example through the command line
Verdict worked_example_cli() {
    const std::vector<std::string> args = {"triml",     "solve", "--alpha",   "0.8", "--beta",    "0.6",
                                           "--gamma",   "0.4",   "--lambda1", "0.5", "--lambda2", "3",
                                           "--lambda3", "5",     "--y0",      "2"};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) return {false, "solve exited with " + std::to_string(code) + ": " + err.str()};

    std::stringstream ss(out.str());
    std::string line;
    std::getline(ss, line);
    std::vector<Real> r, y;
    std::string first_y;
    while (std::getline(ss, line)) {
        std::stringstream ls(line);
        std::string cr, cy;
        std::getline(ls, cr, ',');
        std::getline(ls, cy, ',');
        if (r.empty()) first_y = cy;
        r.push_back(csv::parse(cr));
        y.push_back(csv::parse(cy));
    }
    bool increasing = true;
    for (std::size_t i = 1; i < y.size(); ++i) increasing = increasing && y[i] > y[i - 1];
    Real worst = 0;
    for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, rel_err(y[i], reference::worked_example(r[i])));
    const bool ok = r.size() == 101 && r.front() == 0 && r.back() == 1 && first_y == "2" && increasing && worst <= 1e-10L;
    return {ok, std::to_string(r.size()) + " rows, y(0) printed as \"" + first_y + "\", " +
                    (increasing ? "strictly increasing" : "NOT increasing") + ", y(1) = " + sci(y.back()) +
                    ", max rel err vs independent recurrence " + sci(worst) + " (tol 1e-10)"};
}

// 8. Fox-Wright assembly of the homogeneous solution
Verdict fox_wright() {
    Real worst = 0;
    bool converged = true;
    for (Real r : {0.25L, 0.5L, 0.75L, 1.0L}) {
        const EvalResult fw = homogeneous_via_fox_wright(kWorked, r);
        converged = converged && fw.converged;
        worst = std::max(worst, rel_err(fw.real(), solve_homogeneous(kWorked, r)));
    }
    return {worst <= 1e-8L && converged, "r in {0.25,0.5,0.75,1}: max rel err " + sci(worst) + " (tol 1e-8)"};
}

// 9. T(l,p,k) = T(l-1,p,k) + T(l,p-1,k) + T(l,p,k-1)
Verdict pascal() {
    int checked = 0, broken = 0;
    for (int q = 1; q <= 20; ++q)
        for (int l = 0; l <= q; ++l)
            for (int p = 0; p <= q - l; ++p) {
                const int k = q - l - p;
                ++checked;
                broken += trinomial(l, p, k) != trinomial(l - 1, p, k) + trinomial(l, p - 1, k) + trinomial(l, p, k - 1);
            }
    // the top layer sums to 3^20
    std::uint64_t layer = 0;
    for (int l = 0; l <= 20; ++l)
        for (int p = 0; p <= 20 - l; ++p) layer += trinomial(l, p, 20 - l - p);
    const bool ok = broken == 0 && layer == 3486784401ULL;
    return {ok, std::to_string(checked) + " identities, " + std::to_string(broken) + " broken; layer 20 sums to " +
                    std::to_string(layer)};
}

// 10. particular solution for g = 1 with a single order
Verdict particular() {
    const Forcing one = Forcing::function([](Real) { return Real(1); });
    Real worst = 0;
    for (Real lam : {-0.9L, 1.3L})
        for (Real a : {0.6L, 0.8L})
            for (Real r : {0.5L, 1.0L}) {
                const IVPSpec spec{a, a / 2, a / 4, lam, 0, 0, 0};
                const Real ra = std::pow(r, a);
                const Real want = ra * reference::two_param(a, a + 1, lam * ra);
                worst = std::max(worst, rel_err(particular_solution(spec, one, r).value, want));
            }
    return {worst <= 1e-8L, "alpha in {0.6,0.8}, r in {0.5,1}, lambda1 in {-0.9,1.3}: max rel err " + sci(worst) +
                                " (tol 1e-8)"};
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {1, "exponential reduction", 1, exponential_reduction},
        {2, "reduction equivalences", 5, reductions},
        {3, "Laplace duality", 10, laplace_duality},
        {4, "convolution identity", 10, convolution},
        {5, "Caputo parameter shift", 30, caputo_shift},
        {6, "homogeneous solution", 60, homogeneous_solution},
        {7, "worked example via solve", 5, worked_example_cli},
        {8, "Fox-Wright equivalence", 5, fox_wright},
        {9, "Pascal tetrahedron", 1, pascal},
        {10, "particular solution", 2, particular},
    };
    bool all_pass = true;
    for (const Criterion& c : all) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = v.pass && in_time;
        all_pass = all_pass && pass;
        std::printf("%s criterion %d (%s): %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    v.detail.c_str(), secs, c.budget_s, in_time ? "" : " OVER TIME");
        for (const std::string& n : v.notes) std::printf("    note: %s\n", n.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
