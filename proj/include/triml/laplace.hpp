#pragma once

#include <functional>

#include "triml/quadrature.hpp"
#include "triml/series.hpp"

namespace triml {

/// s^{-δ} (1 - λ1 s^{-α} - λ2 s^{-β} - λ3 s^{-γ})^{-η}, principal branches.
///
/// This is the transform of the univariate form for Re s past the bracket's
/// zeros, and its analytic continuation elsewhere off the cut (-∞, 0].
/// Throws SingularityError where the bracket vanishes.
Complex laplace_closed_form(const MLParams& params, const LambdaTriple& lam, Complex s);

/// Largest real σ > 0 with 1 - Σ λ_i σ^{-order_i} = 0, or 0 when there is none.
Real transform_abscissa(const MLParams& params, const LambdaTriple& lam);

struct TalbotOptions {
    int nodes = 48;
    /// Abscissa shift σ: F is inverted as e^{σt} L^{-1}[F(s + σ)].
    Real shift = 0;
};

struct TalbotResult {
    Real value = 0;
    /// |f(M) - f(M/2)|
    Real abs_error_estimate = 0;
    bool diverged = false;
};

/// Fixed-Talbot inversion of F at t > 0.  The check against M/2 nodes flags
/// divergence when the two differ by more than 1e-6 relative.
TalbotResult talbot_invert(const std::function<Complex(Complex)>& F, Real t, const TalbotOptions& opts = {});

/// Talbot inversion of laplace_closed_form, shifted past the transform's
/// largest real singularity.
TalbotResult invert_univariate_transform(const MLParams& params, const LambdaTriple& lam, Real t, int nodes = 48);

/// r^{δ1+δ2-1} E^{η1+η2}_{α,β,γ,δ1+δ2}(λ1 r^α, λ2 r^β, λ3 r^γ)
Real convolution_closed_form(const MLParams& p1, const MLParams& p2, const LambdaTriple& lam, Real r,
                             const SeriesControl& ctrl = {});

/// ∫_0^r f1(r - s) f2(s) ds of the two univariate forms by graded
/// Gauss–Jacobi quadrature with the weights (r-s)^{δ1-1} s^{δ2-1}.
QuadResult convolution_numeric(const MLParams& p1, const MLParams& p2, const LambdaTriple& lam, Real r,
                               const QuadOptions& opts = {}, const SeriesControl& ctrl = {});

}  // namespace triml
