#include "triml/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <tuple>

#include "triml/special.hpp"

namespace triml {

namespace {

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Golub–Welsch on the orthonormal Jacobi recurrence.  Rows 0 and 1 are
// written out separately: the generic formulas divide 0/0 when a + b is 0
// or -1.
QuadratureRule golub_welsch_jacobi(int n, Real a, Real b) {
    Vector diag(n);
    Vector sub(std::max(n - 1, 1));
    const Real ab = a + b;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            diag[i] = (b - a) / (ab + 2);
        } else {
            const Real s = 2 * i + ab;
            diag[i] = (b * b - a * a) / (s * (s + 2));
        }
    }
    for (int i = 1; i < n; ++i) {
        Real bi;
        if (i == 1) {
            bi = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
        } else {
            const Real s = 2 * i + ab;
            bi = 4 * i * (i + a) * (i + b) * (i + ab) / (s * s * (s + 1) * (s - 1));
        }
        sub[i - 1] = std::sqrt(bi);
    }
    const Real mu0 = std::exp((ab + 1) * std::log(Real(2)) + log_gamma(a + 1) + log_gamma(b + 1) - log_gamma(ab + 2));
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw ConvergenceError("gauss_jacobi: eigenvalue solver failed");
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        const Real v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

const QuadratureRule& cached_jacobi(int n, Real a, Real b) {
    thread_local std::map<std::tuple<int, Real, Real>, QuadratureRule> cache;
    const auto key = std::make_tuple(n, a, b);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, golub_welsch_jacobi(n, a, b)).first;
    return it->second;
}

// Graded panels on the half-interval of length `half` next to one endpoint.
// `dist` maps a distance from the endpoint to the integrand's argument; the
// endpoint weight dist^c is carried by the innermost Gauss–Jacobi panel.
Real graded_half(const std::function<Real(Real)>& g_over_weight, const std::function<Real(Real)>& g_full, Real half,
                 Real c, int n, const QuadOptions& opts) {
    const QuadratureRule& legendre = cached_jacobi(n, 0, 0);
    const QuadratureRule& inner = cached_jacobi(n, 0, c);
    Real total = 0;
    Real hi = half;
    for (int k = 0; k < opts.levels; ++k) {
        const Real lo = hi * opts.ratio;
        const Real mid = (hi + lo) / 2, rad = (hi - lo) / 2;
        Real panel = 0;
        for (int i = 0; i < n; ++i) panel += legendre.weights[i] * g_full(mid + rad * legendre.nodes[i]);
        total += rad * panel;
        hi = lo;
    }
    // ∫_0^hi d^c g(d) dd with d = hi (1 + x) / 2
    const Real rad = hi / 2;
    Real panel = 0;
    for (int i = 0; i < n; ++i) panel += inner.weights[i] * g_over_weight(rad * (1 + inner.nodes[i]));
    total += std::pow(rad, c + 1) * panel;
    return total;
}

Real composite(const std::function<Real(Real)>& f, Real t, Real a, Real b, int n, const QuadOptions& opts) {
    const Real half = t / 2;
    // Left half: distance d = s from 0; weight s^b; smooth part (t - s)^a f(s).
    auto left_smooth = [&](Real d) { return std::pow(t - d, a) * f(d); };
    auto left_full = [&](Real d) { return std::pow(d, b) * std::pow(t - d, a) * f(d); };
    // Right half: distance d = t - s; weight d^a; smooth part s^b f(s).
    auto right_smooth = [&](Real d) { return std::pow(t - d, b) * f(t - d); };
    auto right_full = [&](Real d) { return std::pow(d, a) * std::pow(t - d, b) * f(t - d); };
    return graded_half(left_smooth, left_full, half, b, n, opts) + graded_half(right_smooth, right_full, half, a, n, opts);
}

}  // namespace

QuadratureRule gauss_jacobi(int n, Real a, Real b) {
    if (n < 1) throw DomainError("gauss_jacobi: n must be positive");
    if (!(a > -1) || !(b > -1) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("gauss_jacobi: exponents must exceed -1");
    return golub_welsch_jacobi(n, a, b);
}

QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0, 0); }

void QuadOptions::validate() const {
    if (panel_nodes < 2) throw DomainError("QuadOptions: panel_nodes must be at least 2");
    if (!(ratio > 0 && ratio < 1)) throw DomainError("QuadOptions: ratio must lie in (0, 1)");
    if (levels < 0) throw DomainError("QuadOptions: levels must be non-negative");
}

QuadResult integrate_endpoint_weighted(const std::function<Real(Real)>& f, Real t, Real a, Real b,
                                       const QuadOptions& opts) {
    opts.validate();
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("integrate_endpoint_weighted: t must be positive");
    if (!(a > -1) || !(b > -1)) throw DomainError("integrate_endpoint_weighted: exponents must exceed -1");
    QuadResult r;
    r.value = composite(f, t, a, b, opts.panel_nodes, opts);
    const Real coarse = composite(f, t, a, b, std::max(opts.panel_nodes / 2, 1), opts);
    r.abs_error_estimate = std::fabs(r.value - coarse);
    return r;
}

}  // namespace triml
