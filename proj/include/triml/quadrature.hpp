#pragma once

#include <functional>
#include <vector>

#include "triml/types.hpp"

namespace triml {

/// Nodes and weights on [-1, 1].
struct QuadratureRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

/// n-point Gauss–Jacobi rule for the weight (1 - x)^a (1 + x)^b, a, b > -1.
QuadratureRule gauss_jacobi(int n, Real a, Real b);

QuadratureRule gauss_legendre(int n);

struct QuadOptions {
    int panel_nodes = 16;
    /// Width ratio between neighbouring panels of the geometric grading.
    Real ratio = 0.3L;
    /// Number of graded panels on each half of the interval.
    int levels = 40;

    void validate() const;
};

struct QuadResult {
    Real value = 0;
    /// |I(n) - I(n/2)| from a second pass with half the panel nodes.
    Real abs_error_estimate = 0;
};

/// ∫_0^t (t - s)^a s^b f(s) ds for a, b > -1 and f smooth on (0, t).
///
/// Each half of [0, t] is cut into panels shrinking geometrically toward its
/// endpoint.  The panel touching an endpoint carries that endpoint's power
/// as a Gauss–Jacobi weight; every other panel uses Gauss–Legendre on the
/// full integrand.  Grading also absorbs non-smooth behaviour of f such as
/// fractional powers at the endpoints.
QuadResult integrate_endpoint_weighted(const std::function<Real(Real)>& f, Real t, Real a, Real b,
                                       const QuadOptions& opts = {});

}  // namespace triml
