#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "series_detail.hpp"
#include "triml/special.hpp"

namespace triml {

using detail::kEps;
using detail::kMaxLog;
using detail::SeriesArg;
using detail::ShellMonitor;

EvalResult eval_prabhakar(Real alpha, Real delta, Real eta, Complex s, const SeriesControl& ctrl) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("eval_prabhakar: alpha must be positive");
    if (!std::isfinite(delta) || !std::isfinite(eta)) throw DomainError("eval_prabhakar: delta and eta must be finite");
    ctrl.validate();
    const SeriesArg arg(s);
    ShellMonitor monitor(ctrl);
    SignedLog poch{0, 1};
    Real log_fact = 0;
    for (int l = 0; l <= ctrl.max_shell; ++l) {
        if (l > 0) {
            if (!arg.active) {
                monitor.mark_terminated();
                break;
            }
            const Real factor = eta + (l - 1);
            if (factor == 0) {
                monitor.mark_terminated();
                break;
            }
            poch.log_abs += std::log(std::fabs(factor));
            if (factor < 0) poch.sign = -poch.sign;
            log_fact += std::log(static_cast<Real>(l));
        }
        const SignedLog g = signed_log_gamma(l * alpha + delta);
        Complex term{0, 0};
        Real mag = 0;
        Real rounding = 0;
        if (g.sign != 0) {
            const Real log_mag = poch.log_abs + l * arg.log_abs - log_fact - g.log_abs;
            if (log_mag > kMaxLog) throw OverflowError("eval_prabhakar: term magnitude out of range");
            mag = std::exp(log_mag);
            int sign = poch.sign * g.sign;
            if (arg.negative && (l & 1)) sign = -sign;
            term = arg.real ? Complex(sign * mag, 0) : std::polar(sign * mag, l * arg.phase);
            rounding = detail::term_rounding(mag, g.log_abs + poch.log_abs);
        }
        const bool poles_ahead = (l + 1) * alpha + delta <= 0;
        if (monitor.add(term, mag, rounding, poles_ahead)) break;
    }
    return monitor.result(SummationRoute::shells);
}

namespace {

// ln|t_l| of the Fox-Wright term Γ(λ + a l) s^l / (Γ(μ + b l) l!); -inf when
// the denominator gamma has a pole.
struct FoxWrightTerms {
    GammaArg num;
    GammaArg den;
    SeriesArg arg;

    struct Term {
        Real log_abs;
        int sign;
        Real lg_scale;
    };

    Term at(std::int64_t l) const {
        const Real ll = static_cast<Real>(l);
        const SignedLog top = signed_log_gamma(num.offset + num.slope * ll);
        if (top.sign == 0) throw DomainError("eval_fox_wright_1psi1: numerator gamma at a pole");
        const SignedLog bottom = signed_log_gamma(den.offset + den.slope * ll);
        if (bottom.sign == 0) return {-std::numeric_limits<Real>::infinity(), 0, 0};
        const Real lf = log_gamma(ll + 1);
        int sign = top.sign * bottom.sign;
        if (arg.negative && (l & 1)) sign = -sign;
        return {top.log_abs - bottom.log_abs - lf + ll * arg.log_abs, sign,
                std::fabs(top.log_abs) + std::fabs(bottom.log_abs) + lf};
    }

    Complex value(const Term& t, std::int64_t l) const {
        if (t.sign == 0) return 0;
        if (t.log_abs > kMaxLog) throw OverflowError("eval_fox_wright_1psi1: term magnitude out of range");
        const Real mag = std::exp(t.log_abs);
        return arg.real ? Complex(t.sign * mag, 0) : std::polar(t.sign * mag, static_cast<Real>(l) * arg.phase);
    }
};

}  // namespace

EvalResult eval_fox_wright_1psi1(GammaArg num, GammaArg den, Complex s, const SeriesControl& ctrl) {
    for (Real x : {num.offset, num.slope, den.offset, den.slope})
        if (!std::isfinite(x)) throw DomainError("eval_fox_wright_1psi1: non-finite parameter");
    if (!(den.slope - num.slope > -1)) throw DomainError("eval_fox_wright_1psi1: requires b - a > -1");
    if (num.slope < 0 || den.slope < 0) throw DomainError("eval_fox_wright_1psi1: slopes must be non-negative");
    ctrl.validate();

    const FoxWrightTerms terms{num, den, SeriesArg(s)};
    ShellMonitor monitor(ctrl);
    if (!terms.arg.active) {
        const auto t = terms.at(0);
        const Complex v = terms.value(t, 0);
        monitor.add(v, std::abs(v), detail::term_rounding(std::abs(v), t.lg_scale), false);
        monitor.mark_terminated();
        return monitor.result(SummationRoute::shells);
    }

    // The log-terms are concave for large l (b - a > -1), so past a short
    // prefix the terms rise to a single peak and then decay.  Large peaks
    // are located by bisection on the sign of the log-ratio, and only the
    // window of non-negligible terms around them is summed.
    constexpr std::int64_t kPrefix = 32;
    auto rising = [&](std::int64_t l) { return terms.at(l + 1).log_abs > terms.at(l).log_abs; };
    std::int64_t peak = 0;
    if (rising(kPrefix)) {
        std::int64_t lo = kPrefix, hi = 2 * kPrefix;
        while (rising(hi)) {
            lo = hi;
            hi *= 2;
            if (hi > (std::int64_t{1} << 40)) throw ConvergenceError("eval_fox_wright_1psi1: no peak found");
        }
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (rising(mid) ? lo : hi) = mid;
        }
        peak = hi;
    }

    Complex head{0, 0};
    Real head_mag = 0;
    Real head_round = 0;
    auto accumulate = [&](std::int64_t l) {
        const auto t = terms.at(l);
        const Complex v = terms.value(t, l);
        head += v;
        const Real m = std::abs(v);
        head_mag += m;
        head_round += detail::term_rounding(m, t.lg_scale);
        return t.sign == 0 ? std::numeric_limits<Real>::infinity() : t.log_abs;
    };

    std::int64_t next = 0;
    if (peak > kPrefix) {
        // Walk down from the peak until the terms are negligible against it,
        // then add the prefix, which is not covered by the unimodal shape.
        const Real peak_log = terms.at(peak).log_abs;
        const Real cut = peak_log + std::log(kEps * 1e-3L / static_cast<Real>(peak));
        std::int64_t l = peak;
        while (l >= kPrefix && accumulate(l) > cut) --l;
        for (std::int64_t j = 0; j < std::min<std::int64_t>(kPrefix, l + 1); ++j) accumulate(j);
        next = peak + 1;
    }
    if (next > 0) monitor.add(head, head_mag, head_round, false);

    const std::int64_t budget = std::max<std::int64_t>(ctrl.max_shell, 1);
    for (std::int64_t l = next; l <= next + budget; ++l) {
        const auto t = terms.at(l);
        const Complex v = terms.value(t, l);
        const Real m = std::abs(v);
        const bool poles_ahead = den.offset + den.slope * static_cast<Real>(l + 1) <= 0;
        if (monitor.add(v, m, detail::term_rounding(m, t.lg_scale), poles_ahead && l < peak + 1)) break;
    }
    return monitor.result(SummationRoute::shells);
}

Real bracket_zero_bound(const MLParams& params, Complex u, Complex v, Complex w) {
    const std::array<Real, 3> mag = {std::abs(u), std::abs(v), std::abs(w)};
    const std::array<Real, 3> order = {params.alpha, params.beta, params.gamma};
    if (mag[0] == 0 && mag[1] == 0 && mag[2] == 0) return 0;
    auto excess = [&](Real log_r) {
        Real s = 0;
        for (int i = 0; i < 3; ++i)
            if (mag[i] > 0) s += std::exp(std::log(mag[i]) - order[i] * log_r);
        return s - 1;
    };
    Real lo = -1, hi = 1;
    while (excess(lo) < 0) lo *= 2;
    while (excess(hi) > 0) hi *= 2;
    for (int i = 0; i < 200 && hi - lo > 1e-15L; ++i) {
        const Real mid = (lo + hi) / 2;
        (excess(mid) > 0 ? lo : hi) = mid;
    }
    return std::exp(hi);
}

void ContourSpec::validate() const {
    if (node_count < 8) throw DomainError("ContourSpec: node_count must be at least 8");
    if (radius_scale < 0 || !std::isfinite(radius_scale)) throw DomainError("ContourSpec: bad radius_scale");
    if (!(target_tol > 0)) throw DomainError("ContourSpec: target_tol must be positive");
}

namespace {

// Midpoint trapezoid on τ(θ) = ρ θ (cot θ + i), θ ∈ (-π, π).
Complex hankel_trapezoid(const MLParams& p, Complex u, Complex v, Complex w, Real rho, int n) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    Complex acc{0, 0};
    for (int k = 0; k < n; ++k) {
        const Real theta = -pi + (k + 0.5L) * 2 * pi / n;
        Complex tau, dtau;
        if (std::fabs(theta) < 1e-8L) {
            tau = Complex(rho, rho * theta);
            dtau = Complex(-2 * rho * theta / 3, rho);
        } else {
            const Real cot = std::cos(theta) / std::sin(theta);
            const Real s = std::sin(theta);
            tau = Complex(rho * theta * cot, rho * theta);
            dtau = Complex(rho * (cot - theta / (s * s)), rho);
        }
        if (tau.real() < -kMaxLog) continue;  // e^τ underflows
        const Complex bracket =
            Complex(1) - u * std::pow(tau, -p.alpha) - v * std::pow(tau, -p.beta) - w * std::pow(tau, -p.gamma);
        acc += std::exp(tau) * std::pow(tau, -p.delta) * std::pow(bracket, -p.eta) * dtau;
    }
    // (1/2πi) * (2π/n) * Σ
    return acc / (Complex(0, 1) * static_cast<Real>(n));
}

}  // namespace

EvalResult eval_hankel_contour(const MLParams& params, Complex u, Complex v, Complex w, const ContourSpec& contour) {
    params.validate();
    contour.validate();
    const Real bound = bracket_zero_bound(params, u, v, w);
    // The contour satisfies |τ| ≥ ρ, so ρ > bound keeps every zero of the
    // bracket (and its branch cuts) on the inside.
    const Real scale = contour.radius_scale > 0 ? contour.radius_scale : 1.5L;
    const Real rho = std::max({Real(1), scale * bound, static_cast<Real>(contour.node_count) / 10});
    const Complex coarse = hankel_trapezoid(params, u, v, w, rho, contour.node_count);
    const Complex fine = hankel_trapezoid(params, u, v, w, rho, 2 * contour.node_count);
    EvalResult r;
    r.value = fine;
    r.abs_error_estimate = std::abs(fine - coarse);
    r.shells_used = 2 * contour.node_count;
    r.converged = r.abs_error_estimate <= 10 * contour.target_tol * std::max<Real>(std::abs(fine), 1);
    return r;
}

}  // namespace triml
