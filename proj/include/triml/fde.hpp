#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "triml/quadrature.hpp"
#include "triml/series.hpp"

namespace triml {

/// Caputo problem on r > 0
///
///   D^α y - λ3 D^β y - λ2 D^γ y - λ1 y = g,   y(0) = y0,   1 ≥ α > β > γ > 0.
///
/// The pairing is crossed: λ3 multiplies the β-derivative and λ2 the
/// γ-derivative.  In the solution λ2 rides the (α-γ) slot and λ3 the (α-β)
/// slot of the trivariate function.
struct IVPSpec {
    Real alpha = 1;
    Real beta = 0.5L;
    Real gamma = 0.25L;
    Real lambda1 = 0;
    Real lambda2 = 0;
    Real lambda3 = 0;
    Real y0 = 0;

    void validate() const;
    /// (α, α-γ, α-β, α+1), η = 1
    MLParams homogeneous_params() const;
    /// (α, α-γ, α-β, α), η = 1
    MLParams kernel_params() const;
};

/// Right-hand side g.  Either a callable on [0, domain_end] or a table
/// interpolated linearly.  Default constructed it is g ≡ 0.
class Forcing {
public:
    Forcing() = default;
    static Forcing function(std::function<Real(Real)> g, Real domain_end = std::numeric_limits<Real>::infinity());
    /// `r` strictly increasing; the table covers [r.front(), r.back()].
    static Forcing table(std::vector<Real> r, std::vector<Real> g);

    Real operator()(Real r) const;
    bool is_zero() const { return !fn_ && table_r_.empty(); }
    Real domain_start() const;
    Real domain_end() const;
    /// Table abscissae; empty for a callable.
    const std::vector<Real>& knots() const { return table_r_; }

private:
    std::function<Real(Real)> fn_;
    Real fn_end_ = 0;
    std::vector<Real> table_r_, table_g_;
};

enum class Backend { series, numeric_oracle };

/// "series" or "oracle", as written in solve output.
const char* backend_name(Backend b);

struct SolutionTrace {
    std::vector<Real> r;
    std::vector<Real> y;
    std::vector<Real> abs_error;
    Backend backend = Backend::series;
};

/// y0 (1 + λ1 r^α E_{α,α-γ,α-β,α+1}(λ1 r^α, λ2 r^{α-γ}, λ3 r^{α-β}))
Real solve_homogeneous(const IVPSpec& spec, Real r, const SeriesControl& ctrl = {});

/// ∫_0^r (r-s)^{α-1} E_{α,α-γ,α-β,α}(λ1 (r-s)^α, λ2 (r-s)^{α-γ}, λ3 (r-s)^{α-β}) g(s) ds.
/// The weight (r-s)^{α-1} is integrated exactly and a tabulated g is split
/// at its knots.  Throws ConvergenceError
/// when halving the panel order moves the value by more than 1e-6 relative.
QuadResult particular_solution(const IVPSpec& spec, const Forcing& g, Real r, const QuadOptions& opts = {},
                               const SeriesControl& ctrl = {});

/// Homogeneous plus particular part at every grid point; grid[0] must be 0.
SolutionTrace solve(const IVPSpec& spec, const Forcing& g, const std::vector<Real>& grid,
                    const SeriesControl& ctrl = {}, const QuadOptions& opts = {});

/// L1 time stepping on r_i = i step, i = 0..ceil(horizon/step).  Each step
/// solves one linear scalar equation.  The error column is the difference
/// to a run at twice the step (odd points take the larger neighbour).
SolutionTrace numeric_oracle_solve(const IVPSpec& spec, const Forcing& g, Real step, Real horizon);

/// Max |L1 residual| of the equation over grid points with r ≥ r_last / 2.
/// The trace must sit on a uniform grid starting at 0.
Real residual_check(const IVPSpec& spec, const SolutionTrace& trace, const Forcing& g = {});

/// (l+p+k)! / (l! p! k!) in exact integer arithmetic; q = l+p+k ≤ 20.
std::uint64_t trinomial(int l, int p, int k);

/// Homogeneous solution summed as Σ_{l,p} of 1Ψ1 blocks in λ3 r^{α-β}, the
/// Fox-Wright form of the same solution.
EvalResult homogeneous_via_fox_wright(const IVPSpec& spec, Real r, const SeriesControl& ctrl = {});

/// Kernel G(z) of the particular solution as the same kind of 1Ψ1 sum.
EvalResult kernel_via_fox_wright(const IVPSpec& spec, Real z, const SeriesControl& ctrl = {});

}  // namespace triml
