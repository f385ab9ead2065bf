#pragma once

#include <cstdint>
#include <string_view>

#include "triml/types.hpp"

namespace triml {

/// Parameters of E^η_{α,β,γ,δ}(u, v, w).  Only the orders must be positive;
/// δ ≤ 0 and negative η are legal (fractional derivatives shift δ down).
struct MLParams {
    Real alpha = 1;
    Real beta = 1;
    Real gamma = 1;
    Real delta = 1;
    Real eta = 1;

    void validate() const;
    MLParams with_delta(Real d) const {
        MLParams p = *this;
        p.delta = d;
        return p;
    }
};

struct LambdaTriple {
    Real lambda1 = 0;
    Real lambda2 = 0;
    Real lambda3 = 0;

    void validate() const;
};

enum class SummationRoute {
    automatic,  ///< graded when the active orders share a common step, shells otherwise
    shells,     ///< sum l+p+k = q shells in order
    graded,     ///< collapse to a single series in the common step (commensurate orders only)
};

struct SeriesControl {
    Real rel_tol = 1e-12L;
    int max_shell = 400;
    int consecutive_quiet_shells = 3;
    /// Term budget of the graded route, which may need far more single terms
    /// than max_shell shells would allow on the explicit triple.
    std::int64_t max_graded_terms = 4'000'000;
    SummationRoute route = SummationRoute::automatic;

    void validate() const;
};

struct EvalResult {
    Complex value;
    Real abs_error_estimate = 0;
    int shells_used = 0;  ///< shells, or blocks of max-multiplier terms on the graded route
    bool converged = false;
    SummationRoute route = SummationRoute::shells;

    Real real() const { return value.real(); }
};

/// Throws ConvergenceError carrying `what` when the result is not converged.
const EvalResult& require_converged(const EvalResult& r, std::string_view what);

/// Σ_{l,p,k} (η)_{l+p+k} u^l v^p w^k / (Γ(lα+pβ+kγ+δ) l! p! k!)
EvalResult eval_trivariate(const MLParams& params, Complex u, Complex v, Complex w,
                           const SeriesControl& ctrl = {});

/// r^{δ-1} E^η_{α,β,γ,δ}(λ1 r^α, λ2 r^β, λ3 r^γ)
EvalResult eval_univariate(const MLParams& params, const LambdaTriple& lam, Real r,
                           const SeriesControl& ctrl = {});

/// Prabhakar function E^η_{α,δ}(s), summed by its own single-index loop.
EvalResult eval_prabhakar(Real alpha, Real delta, Real eta, Complex s, const SeriesControl& ctrl = {});

/// Γ(offset + slope * l) as it appears in a Fox-Wright coefficient.
struct GammaArg {
    Real offset = 1;
    Real slope = 1;
};

/// 1Ψ1[(λ, a); (μ, b) | s] = Σ_l Γ(λ + a l) s^l / (Γ(μ + b l) l!), b - a > -1.
EvalResult eval_fox_wright_1psi1(GammaArg num, GammaArg den, Complex s, const SeriesControl& ctrl = {});

struct ContourSpec {
    int node_count = 64;
    /// Contour radius as a multiple of the bracket-zero bound; 0 selects the default.
    Real radius_scale = 0;
    /// Target accuracy; node doubling that moves the result by more than ten
    /// times this flags divergence.
    Real target_tol = 1e-10L;

    void validate() const;
};

/// (1/2πi) ∫_H e^τ τ^{-δ} (1 - u τ^{-α} - v τ^{-β} - w τ^{-γ})^{-η} dτ by the
/// trapezoidal rule on a cotangent contour enclosing every zero of the bracket.
EvalResult eval_hankel_contour(const MLParams& params, Complex u, Complex v, Complex w,
                               const ContourSpec& contour = {});

/// Radius R with |u|R^{-α} + |v|R^{-β} + |w|R^{-γ} = 1: every zero of the
/// bracket lies in |τ| ≤ R.
Real bracket_zero_bound(const MLParams& params, Complex u, Complex v, Complex w);

}  // namespace triml
