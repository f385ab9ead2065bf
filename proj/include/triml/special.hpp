#pragma once

#include <cstdint>

#include "triml/types.hpp"

namespace triml {

/// log|x| together with the sign of x; sign == 0 encodes an exact zero.
struct SignedLog {
    Real log_abs = 0;
    int sign = 1;
};

/// ln Γ(x) for x > 0.
Real log_gamma(Real x);

/// ln|Γ(x)| and sign Γ(x) for any finite x.  At the poles (x = 0, -1, ...)
/// the sign is 0 and log_abs is +inf.
SignedLog signed_log_gamma(Real x);

/// 1/Γ(x); exactly 0 at non-positive integers.
Real reciprocal_gamma(Real x);

/// Rising factorial (eta)_m.
Real pochhammer(Real eta, std::uint64_t m);

/// log|(eta)_m| with sign; sign == 0 when the product contains a zero factor.
SignedLog log_pochhammer(Real eta, std::uint64_t m);

/// B(c, d) = Γ(c)Γ(d)/Γ(c+d) for c, d > 0.
Real beta(Real c, Real d);

/// sin(pi x) with exact zeros at the integers.
Real sin_pi(Real x);

bool is_nonpositive_integer(Real x);

}  // namespace triml
