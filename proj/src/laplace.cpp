#include "triml/laplace.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "triml/special.hpp"

namespace triml {

namespace {

void require_shared_orders(const MLParams& p1, const MLParams& p2) {
    if (p1.alpha != p2.alpha || p1.beta != p2.beta || p1.gamma != p2.gamma)
        throw DomainError("convolution: the two parameter sets must share alpha, beta, gamma");
}

Real bracket_on_axis(const MLParams& p, const LambdaTriple& lam, Real sigma) {
    return 1 - lam.lambda1 * std::pow(sigma, -p.alpha) - lam.lambda2 * std::pow(sigma, -p.beta) -
           lam.lambda3 * std::pow(sigma, -p.gamma);
}

}  // namespace

Complex laplace_closed_form(const MLParams& params, const LambdaTriple& lam, Complex s) {
    params.validate();
    lam.validate();
    if (s.imag() == 0 && s.real() <= 0) throw DomainError("laplace_closed_form: s on the branch cut (-inf, 0]");
    const Complex t1 = lam.lambda1 * std::pow(s, -params.alpha);
    const Complex t2 = lam.lambda2 * std::pow(s, -params.beta);
    const Complex t3 = lam.lambda3 * std::pow(s, -params.gamma);
    const Complex bracket = Real(1) - t1 - t2 - t3;
    const Real scale = 1 + std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (std::abs(bracket) <= 64 * std::numeric_limits<Real>::epsilon() * scale)
        throw SingularityError("laplace_closed_form: bracket vanishes at s");
    return std::pow(s, -params.delta) * std::pow(bracket, -params.eta);
}

Real transform_abscissa(const MLParams& params, const LambdaTriple& lam) {
    params.validate();
    lam.validate();
    const Real bound = bracket_zero_bound(params, lam.lambda1, lam.lambda2, lam.lambda3);
    if (bound == 0) return 0;
    // The bracket is positive beyond the bound; walk down geometrically to
    // the first sign change, then bisect.
    constexpr int kSteps = 2000;
    const Real log_hi = std::log(bound) + 1e-9L;
    const Real log_lo = log_hi - 60;
    Real prev = log_hi;
    for (int i = 1; i <= kSteps; ++i) {
        const Real cur = log_hi + (log_lo - log_hi) * i / kSteps;
        if (bracket_on_axis(params, lam, std::exp(cur)) <= 0) {
            Real lo = cur, hi = prev;
            for (int it = 0; it < 200 && hi - lo > 1e-18L; ++it) {
                const Real mid = (lo + hi) / 2;
                (bracket_on_axis(params, lam, std::exp(mid)) <= 0 ? lo : hi) = mid;
            }
            return std::exp(hi);
        }
        prev = cur;
    }
    return 0;
}

namespace {

// Abate–Valkó fixed Talbot rule with M nodes.
Real fixed_talbot(const std::function<Complex(Complex)>& F, Real t, int m, Real shift) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    const Real r = 2 * m / (5 * t);
    Real acc = 0.5L * (F(Complex(r + shift, 0)) * std::exp(r * t)).real();
    for (int k = 1; k < m; ++k) {
        const Real theta = k * pi / m;
        const Real cot = std::cos(theta) / std::sin(theta);
        const Complex s(r * theta * cot, r * theta);
        const Real sigma = theta + (theta * cot - 1) * cot;
        acc += (std::exp(t * s) * F(s + shift) * Complex(1, sigma)).real();
    }
    return r / m * acc;
}

}  // namespace

TalbotResult talbot_invert(const std::function<Complex(Complex)>& F, Real t, const TalbotOptions& opts) {
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("talbot_invert: t must be positive");
    if (opts.nodes < 4) throw DomainError("talbot_invert: at least four nodes");
    if (!std::isfinite(opts.shift)) throw DomainError("talbot_invert: shift must be finite");
    const Real growth = std::exp(opts.shift * t);
    if (!std::isfinite(growth)) throw OverflowError("talbot_invert: e^{shift t} out of range");
    TalbotResult out;
    const Real fine = fixed_talbot(F, t, opts.nodes, opts.shift);
    const Real coarse = fixed_talbot(F, t, opts.nodes / 2, opts.shift);
    out.value = growth * fine;
    out.abs_error_estimate = growth * std::fabs(fine - coarse);
    out.diverged = !std::isfinite(fine) || std::fabs(fine - coarse) > 1e-6L * std::fabs(fine);
    return out;
}

TalbotResult invert_univariate_transform(const MLParams& params, const LambdaTriple& lam, Real t, int nodes) {
    TalbotOptions opts;
    opts.nodes = nodes;
    opts.shift = transform_abscissa(params, lam);
    return talbot_invert([&](Complex s) { return laplace_closed_form(params, lam, s); }, t, opts);
}

Real convolution_closed_form(const MLParams& p1, const MLParams& p2, const LambdaTriple& lam, Real r,
                             const SeriesControl& ctrl) {
    require_shared_orders(p1, p2);
    if (!(p1.delta > 0) || !(p2.delta > 0)) throw DomainError("convolution_closed_form: requires delta1, delta2 > 0");
    if (!(r > 0)) throw DomainError("convolution_closed_form: requires r > 0");
    MLParams sum = p1;
    sum.delta = p1.delta + p2.delta;
    sum.eta = p1.eta + p2.eta;
    return require_converged(eval_univariate(sum, lam, r, ctrl), "convolution_closed_form").real();
}

QuadResult convolution_numeric(const MLParams& p1, const MLParams& p2, const LambdaTriple& lam, Real r,
                               const QuadOptions& opts, const SeriesControl& ctrl) {
    require_shared_orders(p1, p2);
    if (!(p1.delta > 0) || !(p2.delta > 0)) throw DomainError("convolution_numeric: requires delta1, delta2 > 0");
    if (!(r > 0)) throw DomainError("convolution_numeric: requires r > 0");
    auto series_part = [&](const MLParams& p, Real x) {
        const EvalResult e = eval_trivariate(p, lam.lambda1 * std::pow(x, p.alpha), lam.lambda2 * std::pow(x, p.beta),
                                             lam.lambda3 * std::pow(x, p.gamma), ctrl);
        return require_converged(e, "convolution_numeric").real();
    };
    // The singular powers sit in the quadrature weights; the factors left
    // over are continuous on [0, r].
    return integrate_endpoint_weighted([&](Real s) { return series_part(p1, r - s) * series_part(p2, s); }, r,
                                       p1.delta - 1, p2.delta - 1, opts);
}

}  // namespace triml
