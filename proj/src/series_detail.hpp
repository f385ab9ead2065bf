#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "triml/series.hpp"

namespace triml::detail {

// Largest exponent whose exp() is still finite in Real (~11356 on x87).
inline const Real kMaxLog = std::log(std::numeric_limits<Real>::max()) - 1;
constexpr Real kEps = std::numeric_limits<Real>::epsilon();

// One series argument split into magnitude and phase.  Real arguments keep
// an explicit sign so that real inputs produce exactly real sums.
struct SeriesArg {
    bool active = false;
    bool real = true;
    bool negative = false;
    Real log_abs = 0;
    Real phase = 0;

    explicit SeriesArg(Complex z) {
        active = z != Complex(0);
        real = z.imag() == 0;
        negative = real && z.real() < 0;
        log_abs = active ? std::log(std::abs(z)) : 0;
        phase = real ? 0 : std::arg(z);
    }
};

inline std::vector<Real> log_factorials(int n) {
    std::vector<Real> lf(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 2; i <= n; ++i) lf[i] = lf[i - 1] + std::log(static_cast<Real>(i));
    return lf;
}

// Shell-level stopping rule shared by every series in the library.
//
// A shell is accepted as quiet when its absolute magnitude is below
// rel_tol * max(|partial|, 1) and no larger than the shell before it.
// Summation stops after `quiet_needed` quiet shells in a row with no gamma
// poles left ahead and a geometric tail estimate that leaves room for the
// rounding.  The result counts as converged when tail plus rounding stays
// under the same bound.
class ShellMonitor {
public:
    explicit ShellMonitor(const SeriesControl& ctrl) : ctrl_(ctrl) {}

    // `rounding` is an absolute bound on the rounding error committed in the
    // shell; `poles_ahead` is true while later shells may still contain
    // gamma arguments ≤ 0.
    bool add(Complex shell_sum, Real shell_mag, Real rounding, bool poles_ahead) {
        sum_ += shell_sum;
        rounding_ += rounding;
        rounding_rss_ = std::hypot(rounding_rss_, rounding);
        ++shells_;
        last_mag_ = shell_mag;
        if (shell_mag > 0) {
            prev_nonzero_ = last_nonzero_;
            last_nonzero_ = shell_mag;
        }
        const Real bound = ctrl_.rel_tol * scale();
        // Small but still growing shells (a large δ, say) are not quiet.
        const bool growing = prev_nonzero_ > 0 && last_nonzero_ > prev_nonzero_;
        quiet_ = shell_mag <= bound && !growing ? quiet_ + 1 : 0;
        // Leave room for the rounding already committed, but never demand a
        // tail far below the bound: once rounding dominates, more terms
        // cannot help.
        const Real target = std::max(bound - rounding_rss_, bound / 10);
        done_ = quiet_ >= ctrl_.consecutive_quiet_shells && !poles_ahead && tail() <= target;
        return done_;
    }

    // The series is known to terminate (vanishing Pochhammer symbol).
    void mark_terminated() { terminated_ = true; }

    Real tail() const {
        if (terminated_) return 0;
        if (prev_nonzero_ > 0 && last_nonzero_ < prev_nonzero_)
            return last_mag_ / (1 - last_nonzero_ / prev_nonzero_);
        return last_mag_;
    }

    Real scale() const { return std::max<Real>(std::abs(sum_), 1); }
    Complex sum() const { return sum_; }
    int shells() const { return shells_; }

    EvalResult result(SummationRoute route) const {
        EvalResult r;
        r.value = sum_;
        r.abs_error_estimate = tail() + rounding_;
        r.shells_used = shells_;
        // The estimate adds rounding bounds linearly.  The acceptance test
        // treats shells as independent and adds them in quadrature, so long
        // sums are not refused for bounds that never materialize together.
        r.converged = (done_ || terminated_) && tail() + rounding_rss_ <= ctrl_.rel_tol * scale();
        r.route = route;
        return r;
    }

private:
    const SeriesControl& ctrl_;
    Complex sum_{0, 0};
    Real rounding_ = 0;
    Real rounding_rss_ = 0;
    Real last_mag_ = 0;
    Real last_nonzero_ = 0;
    Real prev_nonzero_ = 0;
    int quiet_ = 0;
    int shells_ = 0;
    bool done_ = false;
    bool terminated_ = false;
};

// Rounding bound for a term exp(L) whose exponent carries absolute error
// ~eps * |components|.
inline Real term_rounding(Real magnitude, Real exponent_scale) {
    return magnitude * kEps * (8 + std::fabs(exponent_scale));
}

}  // namespace triml::detail
