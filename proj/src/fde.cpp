#include "triml/fde.hpp"

#include <algorithm>
#include <cmath>

#include "triml/special.hpp"

namespace triml {

namespace {

bool finite_all(std::initializer_list<Real> xs) {
    return std::all_of(xs.begin(), xs.end(), [](Real x) { return std::isfinite(x); });
}

// L1 weights b_j = (j+1)^{1-ν} - j^{1-ν} and the factor h^{-ν}/Γ(2-ν).
struct L1Weights {
    Real c = 0;
    std::vector<Real> b;

    L1Weights(Real nu, Real h, std::size_t n) : c(std::pow(h, -nu) * reciprocal_gamma(2 - nu)), b(n) {
        for (std::size_t j = 0; j < n; ++j) b[j] = std::pow(Real(j + 1), 1 - nu) - std::pow(Real(j), 1 - nu);
    }

    // c Σ_{j=1}^{n-1} b_j (y_{n-j} - y_{n-j-1}): the history part at step n
    Real history(const std::vector<Real>& diff, std::size_t n) const {
        Real acc = 0;
        for (std::size_t j = 1; j < n; ++j) acc += b[j] * diff[n - j];
        return c * acc;
    }
};

std::vector<Real> oracle_values(const IVPSpec& spec, const Forcing& g, Real step, std::size_t n_steps) {
    const L1Weights wa(spec.alpha, step, n_steps + 1), wb(spec.beta, step, n_steps + 1),
        wc(spec.gamma, step, n_steps + 1);
    const Real lead = wa.c - spec.lambda3 * wb.c - spec.lambda2 * wc.c - spec.lambda1;
    const Real scale = wa.c + std::fabs(spec.lambda3) * wb.c + std::fabs(spec.lambda2) * wc.c + std::fabs(spec.lambda1);
    if (std::fabs(lead) <= 64 * std::numeric_limits<Real>::epsilon() * scale)
        throw SingularityError("numeric_oracle_solve: leading L1 coefficient vanishes for this step");
    std::vector<Real> y(n_steps + 1), diff(n_steps + 1, 0);
    y[0] = spec.y0;
    for (std::size_t n = 1; n <= n_steps; ++n) {
        // L_ν = c_ν (y_n - y_{n-1}) + H_ν, linear in y_n
        const Real h_a = wa.history(diff, n), h_b = wb.history(diff, n), h_c = wc.history(diff, n);
        const Real rhs = g(n * step) + wa.c * y[n - 1] - h_a - spec.lambda3 * (wb.c * y[n - 1] - h_b) -
                         spec.lambda2 * (wc.c * y[n - 1] - h_c);
        y[n] = rhs / lead;
        diff[n] = y[n] - y[n - 1];
    }
    return y;
}

// Binomial coefficient, exact while the result fits.
std::uint64_t binomial(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace

void IVPSpec::validate() const {
    if (!finite_all({alpha, beta, gamma, lambda1, lambda2, lambda3, y0}))
        throw DomainError("IVPSpec: all fields must be finite");
    if (!(alpha <= 1 && alpha > beta && beta > gamma && gamma > 0))
        throw DomainError("IVPSpec: requires 1 >= alpha > beta > gamma > 0");
}

MLParams IVPSpec::homogeneous_params() const { return {alpha, alpha - gamma, alpha - beta, alpha + 1, 1}; }

MLParams IVPSpec::kernel_params() const { return {alpha, alpha - gamma, alpha - beta, alpha, 1}; }

Forcing Forcing::function(std::function<Real(Real)> g, Real domain_end) {
    if (!g) throw DomainError("Forcing: empty callable");
    if (!(domain_end > 0)) throw DomainError("Forcing: domain must extend past 0");
    Forcing f;
    f.fn_ = std::move(g);
    f.fn_end_ = domain_end;
    return f;
}

Forcing Forcing::table(std::vector<Real> r, std::vector<Real> g) {
    if (r.size() != g.size() || r.size() < 2) throw DomainError("Forcing: table needs two or more (r, g) rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(g[i])) throw DomainError("Forcing: table entries must be finite");
        if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("Forcing: table r must be strictly increasing");
    }
    Forcing f;
    f.table_r_ = std::move(r);
    f.table_g_ = std::move(g);
    return f;
}

Real Forcing::domain_start() const { return table_r_.empty() ? 0 : table_r_.front(); }

Real Forcing::domain_end() const {
    if (fn_) return fn_end_;
    if (!table_r_.empty()) return table_r_.back();
    return std::numeric_limits<Real>::infinity();
}

Real Forcing::operator()(Real r) const {
    if (is_zero()) return 0;
    if (r < domain_start() || r > domain_end()) throw DomainError("Forcing: r outside the forcing's domain");
    if (fn_) return fn_(r);
    const auto hi = std::upper_bound(table_r_.begin(), table_r_.end(), r);
    if (hi == table_r_.end()) return table_g_.back();
    const std::size_t i = static_cast<std::size_t>(hi - table_r_.begin());
    if (i == 0) return table_g_.front();
    const Real t = (r - table_r_[i - 1]) / (table_r_[i] - table_r_[i - 1]);
    return table_g_[i - 1] + t * (table_g_[i] - table_g_[i - 1]);
}

const char* backend_name(Backend b) { return b == Backend::series ? "series" : "oracle"; }

Real solve_homogeneous(const IVPSpec& spec, Real r, const SeriesControl& ctrl) {
    spec.validate();
    if (!(r >= 0) || !std::isfinite(r)) throw DomainError("solve_homogeneous: requires r >= 0");
    if (r == 0 || spec.lambda1 == 0) return spec.y0;
    const EvalResult e = eval_trivariate(spec.homogeneous_params(), spec.lambda1 * std::pow(r, spec.alpha),
                                         spec.lambda2 * std::pow(r, spec.alpha - spec.gamma),
                                         spec.lambda3 * std::pow(r, spec.alpha - spec.beta), ctrl);
    require_converged(e, "solve_homogeneous");
    return spec.y0 * (1 + spec.lambda1 * std::pow(r, spec.alpha) * e.real());
}

QuadResult particular_solution(const IVPSpec& spec, const Forcing& g, Real r, const QuadOptions& opts,
                               const SeriesControl& ctrl) {
    spec.validate();
    if (!(r > 0) || !std::isfinite(r)) throw DomainError("particular_solution: requires r > 0");
    if (r > g.domain_end() || g.domain_start() > 0) throw DomainError("particular_solution: forcing does not cover [0, r]");
    if (g.is_zero() || r < 1e-14L) return {};
    const MLParams kp = spec.kernel_params();
    auto kernel = [&](Real x) {
        const EvalResult e = eval_trivariate(kp, spec.lambda1 * std::pow(x, spec.alpha),
                                             spec.lambda2 * std::pow(x, spec.alpha - spec.gamma),
                                             spec.lambda3 * std::pow(x, spec.alpha - spec.beta), ctrl);
        return require_converged(e, "particular_solution").real();
    };
    // A tabulated g has kinks at its knots; each piece between them is
    // integrated on its own.  Only the last piece meets the singularity.
    std::vector<Real> cuts{0};
    for (Real k : g.knots())
        if (k > 0 && k < r) cuts.push_back(k);
    cuts.push_back(r);
    QuadResult total;
    Real magnitude = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const Real a = cuts[j], len = cuts[j + 1] - a;
        const bool last = j + 2 == cuts.size();
        auto piece = [&](Real x) {
            const Real tau = r - a - x;
            const Real weight = last ? 1 : std::pow(tau, spec.alpha - 1);
            return weight * kernel(tau) * g(a + x);
        };
        const QuadResult q = integrate_endpoint_weighted(piece, len, last ? spec.alpha - 1 : 0, 0, opts);
        total.value += q.value;
        total.abs_error_estimate += q.abs_error_estimate;
        magnitude += std::fabs(q.value);
    }
    if (total.abs_error_estimate > 1e-6L * magnitude)
        throw ConvergenceError("particular_solution: quadrature did not settle under panel refinement");
    return total;
}

SolutionTrace solve(const IVPSpec& spec, const Forcing& g, const std::vector<Real>& grid, const SeriesControl& ctrl,
                    const QuadOptions& opts) {
    spec.validate();
    if (grid.empty() || grid.front() != 0) throw DomainError("solve: grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("solve: grid must be strictly increasing");
    SolutionTrace t;
    t.backend = Backend::series;
    const MLParams hp = spec.homogeneous_params();
    for (Real r : grid) {
        t.r.push_back(r);
        if (r == 0) {
            t.y.push_back(spec.y0);
            t.abs_error.push_back(0);
            continue;
        }
        Real y = spec.y0, err = 0;
        if (spec.lambda1 != 0 && spec.y0 != 0) {
            const Real x = spec.lambda1 * std::pow(r, spec.alpha);
            const EvalResult e = eval_trivariate(hp, x, spec.lambda2 * std::pow(r, spec.alpha - spec.gamma),
                                                 spec.lambda3 * std::pow(r, spec.alpha - spec.beta), ctrl);
            require_converged(e, "solve");
            y = spec.y0 * (1 + x * e.real());
            err = std::fabs(spec.y0 * x) * e.abs_error_estimate;
        }
        if (!g.is_zero()) {
            const QuadResult q = particular_solution(spec, g, r, opts, ctrl);
            y += q.value;
            err += q.abs_error_estimate;
        }
        t.y.push_back(y);
        t.abs_error.push_back(err);
    }
    return t;
}

SolutionTrace numeric_oracle_solve(const IVPSpec& spec, const Forcing& g, Real step, Real horizon) {
    spec.validate();
    if (!(step > 0) || !(horizon > step) || !std::isfinite(horizon))
        throw DomainError("numeric_oracle_solve: requires 0 < step < horizon");
    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9L));
    if (n_steps * step > g.domain_end()) throw DomainError("numeric_oracle_solve: forcing does not cover the horizon");
    SolutionTrace t;
    t.backend = Backend::numeric_oracle;
    t.y = oracle_values(spec, g, step, n_steps);
    for (std::size_t i = 0; i <= n_steps; ++i) t.r.push_back(i * step);
    t.abs_error.assign(n_steps + 1, 0);
    if (n_steps >= 4) {
        const std::vector<Real> coarse = oracle_values(spec, g, 2 * step, n_steps / 2);
        for (std::size_t i = 0; i <= n_steps; i += 2) t.abs_error[i] = std::fabs(t.y[i] - coarse[i / 2]);
        for (std::size_t i = 1; i <= n_steps; i += 2)
            t.abs_error[i] = std::max(t.abs_error[i - 1], i + 1 <= n_steps ? t.abs_error[i + 1] : Real(0));
    }
    return t;
}

Real residual_check(const IVPSpec& spec, const SolutionTrace& trace, const Forcing& g) {
    spec.validate();
    const std::size_t n_pts = trace.r.size();
    if (n_pts < 3 || trace.y.size() != n_pts || trace.r.front() != 0)
        throw DomainError("residual_check: needs a trace of three or more points starting at 0");
    const Real h = trace.r[1] - trace.r[0];
    for (std::size_t i = 1; i < n_pts; ++i)
        if (std::fabs(trace.r[i] - i * h) > 1e-9L * h * i) throw DomainError("residual_check: grid is not uniform");
    const L1Weights wa(spec.alpha, h, n_pts), wb(spec.beta, h, n_pts), wc(spec.gamma, h, n_pts);
    std::vector<Real> diff(n_pts, 0);
    for (std::size_t i = 1; i < n_pts; ++i) diff[i] = trace.y[i] - trace.y[i - 1];
    const Real r_from = trace.r.back() / 2;
    Real worst = 0;
    for (std::size_t n = 1; n < n_pts; ++n) {
        if (trace.r[n] < r_from) continue;
        const Real da = wa.c * diff[n] + wa.history(diff, n);
        const Real db = wb.c * diff[n] + wb.history(diff, n);
        const Real dc = wc.c * diff[n] + wc.history(diff, n);
        const Real res = da - spec.lambda3 * db - spec.lambda2 * dc - spec.lambda1 * trace.y[n] - g(trace.r[n]);
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

std::uint64_t trinomial(int l, int p, int k) {
    if (l < 0 || p < 0 || k < 0) return 0;
    if (l + p + k > 20) throw DomainError("trinomial: l + p + k must not exceed 20");
    return binomial(l + p + k, l) * binomial(p + k, p);
}

}  // namespace triml
