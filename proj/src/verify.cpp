#include "triml/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "triml/fde.hpp"
#include "triml/frac_calculus.hpp"
#include "triml/laplace.hpp"

namespace triml {

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}
    Real operator()(Real lo, Real hi) {
        return std::uniform_real_distribution<double>(static_cast<double>(lo), static_cast<double>(hi))(engine_);
    }

private:
    std::mt19937_64 engine_;
};

Real scaled(Complex got, Complex want) { return std::abs(got - want) / std::max<Real>(std::abs(want), 1); }
Real relative(Real got, Real want) { return std::fabs(got - want) / std::fabs(want); }

const IVPSpec kWorked{0.8L, 0.6L, 0.4L, 0.5L, 3, 5, 2};

Real exp_reduction() {
    const MLParams ones{1, 1, 1, 1, 1};
    Real worst = 0;
    for (int u = -2; u <= 2; ++u)
        for (int v = -2; v <= 2; ++v)
            for (int w = -2; w <= 2; ++w) {
                const Real want = std::exp(Real(u + v + w));
                const EvalResult e = require_converged(eval_trivariate(ones, u, v, w), "exp-reduction");
                worst = std::max(worst, std::abs(e.value - want) / want);
            }
    return worst;
}

// v = w = 0 leaves the Prabhakar function, summed by a separate loop
Real prabhakar_reduction() {
    Draw draw(101);
    Real worst = 0;
    for (int i = 0; i < 50; ++i) {
        const MLParams p{draw(0.5L, 2), draw(0.5L, 2), draw(0.5L, 2), draw(0.3L, 3), draw(0.3L, 2)};
        const Real s = draw(-2, 2);
        const Complex got = require_converged(eval_trivariate(p, s, 0, 0), "prabhakar-reduction").value;
        const Complex want = require_converged(eval_prabhakar(p.alpha, p.delta, p.eta, s), "prabhakar-reduction").value;
        worst = std::max(worst, scaled(got, want));
    }
    return worst;
}

Real hankel_contour() {
    Draw draw(102);
    Real worst = 0;
    for (int i = 0; i < 8; ++i) {
        const MLParams p{draw(0.5L, 1.5L), draw(0.5L, 1.5L), draw(0.5L, 1.5L), draw(0.5L, 2.5L), draw(0.5L, 2)};
        const Complex u(draw(-1, 1), draw(-0.5L, 0.5L)), v(draw(-1, 1), 0), w(draw(-1, 1), draw(-0.5L, 0.5L));
        const EvalResult c = require_converged(eval_hankel_contour(p, u, v, w), "hankel-contour");
        const EvalResult s = require_converged(eval_trivariate(p, u, v, w), "hankel-contour");
        worst = std::max(worst, scaled(c.value, s.value));
    }
    return worst;
}

Real laplace_duality() {
    Real worst = 0;
    auto one = [&](const MLParams& p, const LambdaTriple& lam, Real t) {
        const TalbotResult r = invert_univariate_transform(p, lam, t);
        if (r.diverged) throw ConvergenceError("laplace-duality: Talbot inversion diverged");
        const Complex want = require_converged(eval_univariate(p, lam, t), "laplace-duality").value;
        worst = std::max(worst, scaled(r.value, want));
    };
    for (Real t : {0.25L, 0.5L, 1.0L}) one(kWorked.homogeneous_params(), {0.5L, 3, 5}, t);
    Draw draw(103);
    for (int i = 0; i < 8; ++i) {
        const MLParams p{draw(0.3L, 1.5L), draw(0.3L, 1.5L), draw(0.3L, 1.5L), draw(0.3L, 2.5L), draw(0.5L, 2)};
        const LambdaTriple lam{draw(-2, 2), draw(-2, 2), draw(-2, 2)};
        for (Real t : {0.25L, 1.0L}) one(p, lam, t);
    }
    return worst;
}

Real convolution() {
    Draw draw(104);
    QuadOptions opts;
    opts.panel_nodes = 10;
    opts.ratio = 0.2L;
    opts.levels = 16;
    Real worst = 0;
    for (int i = 0; i < 4; ++i) {
        const Real a = draw(0.5L, 1.5L), b = draw(0.5L, 1.5L), g = draw(0.5L, 1.5L);
        const MLParams p1{a, b, g, draw(0.5L, 2.5L), draw(0.5L, 2)};
        const MLParams p2{a, b, g, draw(0.5L, 2.5L), draw(0.5L, 2)};
        const LambdaTriple lam{draw(-2, 2), draw(-2, 2), draw(-2, 2)};
        for (Real r : {0.3L, 1.0L}) {
            const Real want = convolution_closed_form(p1, p2, lam, r);
            worst = std::max(worst, relative(convolution_numeric(p1, p2, lam, r, opts).value, want));
        }
    }
    return worst;
}

// L1 applied to samples of r E(...) against the shifted closed form.  The
// error on [1/2, 1] is O(h^{2-ν}); the check reports the worst distance of
// the observed order from 2 - ν.
Real caputo_shift() {
    const MLParams p{0.9L, 1.3L, 1.7L, 2, 1};
    const LambdaTriple lam{-1, 0.5L, 0.3L};
    Real worst = 0;
    for (Real nu : {0.4L, 0.8L}) {
        Real err[3];
        int idx = 0;
        for (int n : {256, 512, 1024}) {
            const GridFunction f = GridFunction::sample(
                [&](Real r) { return require_converged(eval_univariate(p, lam, r), "caputo-shift").real(); }, 0,
                1.0L / n, n);
            const GridFunction d = caputo_l1_numeric(f, nu);
            Real e = 0;
            for (std::size_t i = 0; i < d.grid.size(); ++i) {
                if (d.grid[i] < 0.5L) continue;
                e = std::max(e, std::fabs(d.values[i] - caputo_derivative_univariate(p, lam, {nu, 0}, d.grid[i])));
            }
            err[idx++] = e;
        }
        for (int k = 0; k < 2; ++k) worst = std::max(worst, std::fabs(std::log2(err[k] / err[k + 1]) - (2 - nu)));
    }
    return worst;
}

// series solution against the L1 time stepper on a problem where the step
// resolves the growth rate
Real l1_solver() {
    const IVPSpec spec{0.8L, 0.6L, 0.4L, -0.5L, 0.3L, -0.2L, 2};
    const int n = 512;
    const SolutionTrace oracle = numeric_oracle_solve(spec, {}, 1.0L / n, 1);
    std::vector<Real> grid(oracle.r);
    const SolutionTrace series = solve(spec, {}, grid);
    Real worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::fabs(series.y[i] - oracle.y[i]));
    return worst;
}

Real pascal() {
    int broken = 0;
    for (int q = 1; q <= 20; ++q)
        for (int l = 0; l <= q; ++l)
            for (int p = 0; p <= q - l; ++p) {
                const int k = q - l - p;
                if (l * p * k == 0) continue;
                if (trinomial(l, p, k) != trinomial(l - 1, p, k) + trinomial(l, p - 1, k) + trinomial(l, p, k - 1))
                    ++broken;
            }
    return broken;
}

Real fox_wright() {
    Real worst = 0;
    for (Real r : {0.25L, 0.5L}) {
        const EvalResult fw = require_converged(homogeneous_via_fox_wright(kWorked, r), "fox-wright");
        worst = std::max(worst, relative(fw.real(), solve_homogeneous(kWorked, r)));
    }
    return worst;
}

Real fox_wright_kernel() {
    Real worst = 0;
    for (Real z : {0.2L, 0.5L, 1.0L}) {
        const EvalResult g = require_converged(kernel_via_fox_wright(kWorked, z), "fox-wright-kernel");
        const LambdaTriple lam{kWorked.lambda1, kWorked.lambda2, kWorked.lambda3};
        const Complex want =
            require_converged(eval_trivariate(kWorked.kernel_params(), lam.lambda1 * std::pow(z, kWorked.alpha),
                                              lam.lambda2 * std::pow(z, kWorked.alpha - kWorked.gamma),
                                              lam.lambda3 * std::pow(z, kWorked.alpha - kWorked.beta)),
                              "fox-wright-kernel")
                .value;
        worst = std::max(worst, relative(g.real(), want.real()));
    }
    return worst;
}

// λ2 = λ3 = 0 and g = 1: r^α E_{α,α+1}(λ1 r^α)
Real particular() {
    const Forcing one = Forcing::function([](Real) { return Real(1); });
    Real worst = 0;
    for (Real a : {0.6L, 0.8L})
        for (Real r : {0.5L, 1.0L}) {
            const IVPSpec spec{a, a / 2, a / 4, -0.9L, 0, 0, 0};
            const Real ra = std::pow(r, a);
            const Real want =
                ra * require_converged(eval_prabhakar(a, a + 1, 1, spec.lambda1 * ra), "particular").real();
            worst = std::max(worst, relative(particular_solution(spec, one, r).value, want));
        }
    return worst;
}

struct Check {
    std::string name;
    Real tol;
    std::function<Real()> run;
};

const std::vector<Check>& checks() {
    static const std::vector<Check> all = {
        {"exp-reduction", 1e-10L, exp_reduction},
        {"prabhakar-reduction", 1e-11L, prabhakar_reduction},
        {"hankel-contour", 1e-8L, hankel_contour},
        {"laplace-duality", 1e-6L, laplace_duality},
        {"convolution", 1e-6L, convolution},
        {"caputo-shift", 0.3L, caputo_shift},
        {"l1-solver", 1e-2L, l1_solver},
        {"pascal", 0, pascal},
        {"fox-wright", 1e-8L, fox_wright},
        {"fox-wright-kernel", 1e-10L, fox_wright_kernel},
        {"particular", 1e-8L, particular},
    };
    return all;
}

}  // namespace

const std::vector<std::string>& verify_check_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const Check& c : checks()) n.push_back(c.name);
        return n;
    }();
    return names;
}

CheckOutcome run_verify_check(std::string_view name, std::optional<Real> tol) {
    for (const Check& c : checks()) {
        if (c.name != name) continue;
        CheckOutcome out;
        out.name = c.name;
        out.tol = tol.value_or(c.tol);
        try {
            out.max_err = c.run();
        } catch (const Error& e) {
            out.max_err = std::numeric_limits<Real>::infinity();
            out.message = e.what();
        }
        out.pass = out.max_err <= out.tol;
        return out;
    }
    throw DomainError("verify: unknown check '" + std::string(name) + "'");
}

}  // namespace triml
