#pragma once

#include <functional>
#include <vector>

#include "triml/quadrature.hpp"
#include "triml/series.hpp"

namespace triml {

struct FracOrder {
    Real nu = 0;
    Real offset_a = 0;

    void validate() const;
};

/// Samples on a uniform grid r_i = grid[0] + i h.
struct GridFunction {
    std::vector<Real> grid;
    std::vector<Real> values;
    Real step = 0;

    void validate() const;
    static GridFunction sample(const std::function<Real(Real)>& f, Real start, Real step, int intervals);
};

/// d^n/dr^n of r^{δ-1}E(λ1 r^α, λ2 r^β, λ3 r^γ): the same form with δ - n.
Real nth_derivative_univariate(const MLParams& params, const LambdaTriple& lam, int n, Real r,
                               const SeriesControl& ctrl = {});

/// Riemann–Liouville integral of order ν from a: δ → δ + ν.
Real rl_integral_univariate(const MLParams& params, const LambdaTriple& lam, const FracOrder& order, Real y,
                            const SeriesControl& ctrl = {});

/// Riemann–Liouville derivative of order ν from a: δ → δ - ν.
Real rl_derivative_univariate(const MLParams& params, const LambdaTriple& lam, const FracOrder& order, Real y,
                              const SeriesControl& ctrl = {});

/// Caputo derivative of order ν from a.
///
/// With n = ⌈ν⌉ the shift δ → δ - ν holds as is when δ - 1 > n - 1.
/// Otherwise the series terms of degree ≤ n - 1 must be polynomial
/// (exponent a non-negative integer, as for δ = 1); the Caputo derivative
/// annihilates them, so their R–L images are subtracted from the shifted
/// form.  Any other case (a term (r-a)^μ with μ ≤ n - 1 non-integer, for
/// example 0 < δ < 1) has no Caputo derivative and raises DomainError.
/// Integer ν is the classical derivative.
Real caputo_derivative_univariate(const MLParams& params, const LambdaTriple& lam, const FracOrder& order, Real y,
                                  const SeriesControl& ctrl = {});

/// Caputo derivative of (r-a)^γ/Γ(γ+1): (r-a)^{γ-ν}/Γ(γ-ν+1) for γ > ⌊ν⌋,
/// 0 for the integer powers γ < ν.
Real caputo_power(Real gamma_exp, const FracOrder& order, Real r);

/// L1 scheme for the Caputo derivative, 0 < ν < 1, at grid points 1..N.
GridFunction caputo_l1_numeric(const GridFunction& f, Real nu);

/// Grünwald–Letnikov approximation of the R–L derivative, 0 < ν < 1, at
/// grid points 1..N.  First order.
GridFunction rl_grunwald_numeric(const GridFunction& f, Real nu);

/// (1/Γ(ν)) ∫_a^y (y-s)^{ν-1} (s-a)^b g(s) ds by graded Gauss–Jacobi
/// quadrature, g smooth away from the endpoints.
QuadResult rl_integral_quadrature(const std::function<Real(Real)>& g, Real b, const FracOrder& order, Real y,
                                  const QuadOptions& opts = {});

}  // namespace triml
