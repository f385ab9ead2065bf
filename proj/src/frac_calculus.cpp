#include "triml/frac_calculus.hpp"

#include <cmath>

#include "triml/special.hpp"

namespace triml {

namespace {

Real univariate(const MLParams& params, const LambdaTriple& lam, Real r, const SeriesControl& ctrl) {
    return require_converged(eval_univariate(params, lam, r, ctrl), "univariate form").real();
}

Real elapsed(const FracOrder& order, Real y, const char* what) {
    order.validate();
    if (!(y > order.offset_a)) throw DomainError(std::string(what) + ": requires y > a");
    return y - order.offset_a;
}

bool is_integer(Real x) { return std::fabs(x - std::nearbyint(x)) <= 1e-12L * std::max<Real>(1, std::fabs(x)); }

// Σ over series terms of exponent j ∈ {0..n-1} of coeff * x^{j-ν}/Γ(j+1-ν):
// the R–L images of the polynomial part that the Caputo derivative drops.
Real polynomial_part_image(const MLParams& p, const LambdaTriple& lam, int n, Real nu, Real x) {
    const Real limit = n - 1 + 1e-12L;
    const Real d0 = p.delta - 1;
    Real total = 0;
    for (int l = 0; d0 + l * p.alpha <= limit; ++l) {
        if (l > 0 && lam.lambda1 == 0) break;
        for (int q = 0; d0 + l * p.alpha + q * p.beta <= limit; ++q) {
            if (q > 0 && lam.lambda2 == 0) break;
            for (int k = 0; d0 + l * p.alpha + q * p.beta + k * p.gamma <= limit; ++k) {
                if (k > 0 && lam.lambda3 == 0) break;
                const Real coeff = pochhammer(p.eta, l + q + k) * std::pow(lam.lambda1, l) * std::pow(lam.lambda2, q) *
                                   std::pow(lam.lambda3, k) /
                                   std::exp(log_gamma(l + 1.0L) + log_gamma(q + 1.0L) + log_gamma(k + 1.0L));
                if (coeff == 0) continue;
                const Real mu = d0 + l * p.alpha + q * p.beta + k * p.gamma;
                if (!is_integer(mu) || std::nearbyint(mu) < 0)
                    throw DomainError("caputo_derivative_univariate: a term (r-a)^mu with non-integer mu <= "
                                      "ceil(nu) - 1 has no Caputo derivative");
                const Real j = std::nearbyint(mu);
                total += coeff * std::pow(x, j - nu) * reciprocal_gamma(j + 1 - nu);
            }
        }
    }
    return total;
}

}  // namespace

void FracOrder::validate() const {
    if (!(nu >= 0) || !std::isfinite(nu)) throw DomainError("FracOrder: nu must be non-negative");
    if (!std::isfinite(offset_a)) throw DomainError("FracOrder: offset must be finite");
}

void GridFunction::validate() const {
    if (grid.size() != values.size()) throw DomainError("GridFunction: grid and values differ in length");
    if (grid.size() < 2 || !(step > 0)) throw DomainError("GridFunction: needs two points and a positive step");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const Real h = grid[i] - grid[i - 1];
        if (std::fabs(h - step) > 1e-12L * step) throw DomainError("GridFunction: grid is not uniform");
    }
}

GridFunction GridFunction::sample(const std::function<Real(Real)>& f, Real start, Real step, int intervals) {
    GridFunction g;
    g.step = step;
    for (int i = 0; i <= intervals; ++i) {
        const Real r = start + i * step;
        g.grid.push_back(r);
        g.values.push_back(f(r));
    }
    return g;
}

Real nth_derivative_univariate(const MLParams& params, const LambdaTriple& lam, int n, Real r,
                               const SeriesControl& ctrl) {
    if (n < 0) throw DomainError("nth_derivative_univariate: n must be non-negative");
    if (!(r > 0)) throw DomainError("nth_derivative_univariate: requires r > 0");
    return univariate(params.with_delta(params.delta - n), lam, r, ctrl);
}

Real rl_integral_univariate(const MLParams& params, const LambdaTriple& lam, const FracOrder& order, Real y,
                            const SeriesControl& ctrl) {
    const Real x = elapsed(order, y, "rl_integral_univariate");
    if (!(params.delta > 0)) throw DomainError("rl_integral_univariate: requires delta > 0");
    return univariate(params.with_delta(params.delta + order.nu), lam, x, ctrl);
}

Real rl_derivative_univariate(const MLParams& params, const LambdaTriple& lam, const FracOrder& order, Real y,
                              const SeriesControl& ctrl) {
    const Real x = elapsed(order, y, "rl_derivative_univariate");
    if (!(params.delta > 0)) throw DomainError("rl_derivative_univariate: requires delta > 0");
    return univariate(params.with_delta(params.delta - order.nu), lam, x, ctrl);
}

Real caputo_derivative_univariate(const MLParams& params, const LambdaTriple& lam, const FracOrder& order, Real y,
                                  const SeriesControl& ctrl) {
    const Real x = elapsed(order, y, "caputo_derivative_univariate");
    if (!(params.delta > 0)) throw DomainError("caputo_derivative_univariate: requires delta > 0");
    if (order.nu == 0) return univariate(params, lam, x, ctrl);
    if (is_integer(order.nu)) return nth_derivative_univariate(params, lam, static_cast<int>(std::nearbyint(order.nu)), x, ctrl);
    const int n = static_cast<int>(std::ceil(order.nu));
    const Real shifted = univariate(params.with_delta(params.delta - order.nu), lam, x, ctrl);
    if (params.delta - 1 > n - 1) return shifted;
    return shifted - polynomial_part_image(params, lam, n, order.nu, x);
}

Real caputo_power(Real gamma_exp, const FracOrder& order, Real r) {
    const Real x = elapsed(order, r, "caputo_power");
    if (!std::isfinite(gamma_exp) || !(gamma_exp > -1)) throw DomainError("caputo_power: requires gamma > -1");
    const Real nu = order.nu;
    if (nu == 0) return std::pow(x, gamma_exp) * reciprocal_gamma(gamma_exp + 1);
    if (!is_integer(nu) && !(gamma_exp > std::floor(nu))) {
        if (is_integer(gamma_exp)) return 0;  // polynomial of degree < ν
        throw DomainError("caputo_power: requires gamma > floor(nu)");
    }
    return std::pow(x, gamma_exp - nu) * reciprocal_gamma(gamma_exp - nu + 1);
}

GridFunction caputo_l1_numeric(const GridFunction& f, Real nu) {
    f.validate();
    if (!(nu > 0 && nu < 1)) throw DomainError("caputo_l1_numeric: requires 0 < nu < 1");
    if (f.grid.size() < 3) throw DomainError("caputo_l1_numeric: needs at least three points");
    const std::size_t n_pts = f.grid.size();
    std::vector<Real> b(n_pts);
    for (std::size_t j = 0; j < n_pts; ++j) b[j] = std::pow(Real(j + 1), 1 - nu) - std::pow(Real(j), 1 - nu);
    const Real c = std::pow(f.step, -nu) * reciprocal_gamma(2 - nu);
    GridFunction out;
    out.step = f.step;
    std::vector<Real> diff(n_pts);
    for (std::size_t i = 1; i < n_pts; ++i) diff[i] = f.values[i] - f.values[i - 1];
    for (std::size_t n = 1; n < n_pts; ++n) {
        Real acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += b[j] * diff[n - j];
        out.grid.push_back(f.grid[n]);
        out.values.push_back(c * acc);
    }
    return out;
}

GridFunction rl_grunwald_numeric(const GridFunction& f, Real nu) {
    f.validate();
    if (!(nu > 0 && nu < 1)) throw DomainError("rl_grunwald_numeric: requires 0 < nu < 1");
    const std::size_t n_pts = f.grid.size();
    std::vector<Real> w(n_pts);
    w[0] = 1;
    for (std::size_t j = 1; j < n_pts; ++j) w[j] = w[j - 1] * (1 - (nu + 1) / j);
    const Real c = std::pow(f.step, -nu);
    GridFunction out;
    out.step = f.step;
    for (std::size_t n = 1; n < n_pts; ++n) {
        Real acc = 0;
        for (std::size_t j = 0; j <= n; ++j) acc += w[j] * f.values[n - j];
        out.grid.push_back(f.grid[n]);
        out.values.push_back(c * acc);
    }
    return out;
}

QuadResult rl_integral_quadrature(const std::function<Real(Real)>& g, Real b, const FracOrder& order, Real y,
                                  const QuadOptions& opts) {
    const Real x = elapsed(order, y, "rl_integral_quadrature");
    if (!(order.nu > 0)) throw DomainError("rl_integral_quadrature: requires nu > 0");
    const Real a = order.offset_a;
    QuadResult r = integrate_endpoint_weighted([&](Real s) { return g(a + s); }, x, order.nu - 1, b, opts);
    const Real scale = reciprocal_gamma(order.nu);
    r.value *= scale;
    r.abs_error_estimate *= scale;
    return r;
}

}  // namespace triml
