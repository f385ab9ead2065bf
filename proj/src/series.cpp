#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "series_detail.hpp"
#include "triml/special.hpp"

namespace triml {

using detail::kMaxLog;
using detail::SeriesArg;
using detail::ShellMonitor;

void MLParams::validate() const {
    for (Real o : {alpha, beta, gamma})
        if (!(o > 0) || !std::isfinite(o)) throw DomainError("orders alpha, beta, gamma must be positive and finite");
    if (!std::isfinite(delta) || !std::isfinite(eta)) throw DomainError("delta and eta must be finite");
}

void LambdaTriple::validate() const {
    if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || !std::isfinite(lambda3))
        throw DomainError("lambda coefficients must be finite");
}

void SeriesControl::validate() const {
    if (!(rel_tol > 0)) throw DomainError("rel_tol must be positive");
    if (max_shell < 1) throw DomainError("max_shell must be at least 1");
    if (consecutive_quiet_shells < 0) throw DomainError("consecutive_quiet_shells must be non-negative");
    if (max_graded_terms < 1) throw DomainError("max_graded_terms must be positive");
}

const EvalResult& require_converged(const EvalResult& r, std::string_view what) {
    if (!r.converged) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3Lg", r.abs_error_estimate);
        throw ConvergenceError(std::string(what) + ": series did not converge after " + std::to_string(r.shells_used) +
                               " shells (error estimate " + buf + ")");
    }
    return r;
}

namespace {

Complex phase_factor(int sign, bool real, Real phase) {
    if (real) return {static_cast<Real>(sign), 0};
    return std::polar(static_cast<Real>(sign), phase);
}

// log|(η)_q / (Γ(lα+mβ+kγ+δ) l! m! k!)| and its sign for one shell, in
// (l, m) loop order.  The coefficients do not depend on the arguments, so
// repeated evaluation with one parameter set (quadrature nodes, grids)
// reuses them.
struct ShellCoefficients {
    std::vector<SignedLog> coef;
    std::vector<Real> value;     // signed coefficient, 0 where it would underflow
    std::vector<Real> lg_scale;  // |ln Γ| + |ln (η)_q|, for the rounding bound
    Real max_log = 0;            // largest |coef.log_abs| in the shell
};

class CoefficientCache {
public:
    // Shells past this index are computed on the fly; a table grows as q^3.
    static constexpr int kMaxCachedShell = 160;
    // Parameter sets kept at once (a convolution alternates between two).
    static constexpr std::size_t kSlots = 4;

    const ShellCoefficients* shell(const MLParams& p, int q, const SignedLog& poch, const std::vector<Real>& lf) {
        if (q > kMaxCachedShell) return nullptr;
        Entry& e = find(p);
        // Shells are requested in order, so only the next one is ever built.
        if (static_cast<int>(e.shells.size()) == q) e.shells.push_back(build(p, q, poch, lf));
        if (static_cast<int>(e.shells.size()) <= q) return nullptr;
        return &e.shells[q];
    }

    static ShellCoefficients build(const MLParams& p, int q, const SignedLog& poch, const std::vector<Real>& lf) {
        ShellCoefficients s;
        s.coef.reserve(static_cast<std::size_t>(q + 1) * (q + 2) / 2);
        s.value.reserve(s.coef.capacity());
        s.lg_scale.reserve(s.coef.capacity());
        for (int l = 0; l <= q; ++l)
            for (int m = 0; m <= q - l; ++m) {
                const int k = q - l - m;
                const SignedLog g = signed_log_gamma(l * p.alpha + m * p.beta + k * p.gamma + p.delta);
                if (g.sign == 0) {
                    s.coef.push_back({0, 0});
                    s.value.push_back(0);
                    s.lg_scale.push_back(0);
                    continue;
                }
                const SignedLog c{poch.log_abs - lf[l] - lf[m] - lf[k] - g.log_abs, poch.sign * g.sign};
                s.coef.push_back(c);
                s.value.push_back(c.log_abs > -kMaxLog ? c.sign * std::exp(c.log_abs) : 0);
                s.lg_scale.push_back(g.log_abs + poch.log_abs);
                s.max_log = std::max(s.max_log, std::fabs(c.log_abs));
            }
        return s;
    }

private:
    struct Entry {
        MLParams params;
        std::vector<ShellCoefficients> shells;
        std::uint64_t used = 0;
    };

    static bool same(const MLParams& a, const MLParams& b) {
        return a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma && a.delta == b.delta && a.eta == b.eta;
    }

    Entry& find(const MLParams& p) {
        ++clock_;
        for (Entry& e : entries_)
            if (same(e.params, p)) {
                e.used = clock_;
                return e;
            }
        if (entries_.size() < kSlots) {
            entries_.push_back({p, {}, clock_});
            return entries_.back();
        }
        Entry* oldest = &entries_[0];
        for (Entry& e : entries_)
            if (e.used < oldest->used) oldest = &e;
        *oldest = {p, {}, clock_};
        return *oldest;
    }

    std::vector<Entry> entries_;
    std::uint64_t clock_ = 0;
};

EvalResult sum_shells(const MLParams& p, Complex u, Complex v, Complex w, const SeriesControl& ctrl) {
    const std::array<SeriesArg, 3> arg = {SeriesArg(u), SeriesArg(v), SeriesArg(w)};
    const std::array<Real, 3> order = {p.alpha, p.beta, p.gamma};
    const bool all_real = arg[0].real && arg[1].real && arg[2].real;

    Real min_order = std::numeric_limits<Real>::infinity();
    for (int i = 0; i < 3; ++i)
        if (arg[i].active) min_order = std::min(min_order, order[i]);

    const std::array<Complex, 3> z = {u, v, w};
    Real max_log_arg = 0;
    for (const auto& a : arg)
        if (a.active) max_log_arg = std::max(max_log_arg, std::fabs(a.log_abs));
    std::array<std::vector<Complex>, 3> pw;
    std::array<std::vector<Real>, 3> rw;

    thread_local std::vector<Real> lf;
    if (static_cast<int>(lf.size()) < ctrl.max_shell + 2) lf = detail::log_factorials(ctrl.max_shell + 1);
    thread_local CoefficientCache cache;
    ShellMonitor monitor(ctrl);
    SignedLog poch{0, 1};

    for (int q = 0; q <= ctrl.max_shell; ++q) {
        if (q > 0) {
            const Real factor = p.eta + (q - 1);
            if (factor == 0) {
                monitor.mark_terminated();
                break;
            }
            poch.log_abs += std::log(std::fabs(factor));
            if (factor < 0) poch.sign = -poch.sign;
        }
        ShellCoefficients local;
        const ShellCoefficients* coef = cache.shell(p, q, poch, lf);
        if (coef == nullptr) {
            local = CoefficientCache::build(p, q, poch, lf);
            coef = &local;
        }
        Complex shell{0, 0};
        Real shell_mag = 0;
        Real shell_round = 0;
        // Argument powers up to degree q, by repeated multiplication.
        for (int i = 0; i < 3; ++i) {
            if (all_real) {
                if (q == 0) rw[i].assign(1, Real(1));
                else rw[i].push_back(rw[i].back() * z[i].real());
            } else {
                if (q == 0) pw[i].assign(1, Complex(1));
                else pw[i].push_back(pw[i].back() * z[i]);
            }
        }
        // Products stay in range when the exponents do; otherwise every
        // term goes through log space.
        const bool direct = coef->max_log + q * max_log_arg < kMaxLog / 2;
        std::size_t idx = 0;
        for (int l = 0; l <= q; ++l) {
            for (int m = 0; m <= q - l; ++m, ++idx) {
                const int k = q - l - m;
                if ((l > 0 && !arg[0].active) || (m > 0 && !arg[1].active) || (k > 0 && !arg[2].active)) continue;
                const SignedLog c = coef->coef[idx];
                if (c.sign == 0) continue;
                Complex term;
                Real mag;
                if (direct && all_real) {
                    const Real t = coef->value[idx] * (rw[0][l] * rw[1][m] * rw[2][k]);
                    term = t;
                    mag = std::fabs(t);
                } else if (direct) {
                    term = coef->value[idx] * (pw[0][l] * pw[1][m] * pw[2][k]);
                    mag = std::abs(term);
                } else {
                    const Real log_mag = c.log_abs + l * arg[0].log_abs + m * arg[1].log_abs + k * arg[2].log_abs;
                    if (log_mag > kMaxLog) throw OverflowError("eval_trivariate: term magnitude out of range");
                    mag = std::exp(log_mag);
                    int sign = c.sign;
                    if (arg[0].negative && (l & 1)) sign = -sign;
                    if (arg[1].negative && (m & 1)) sign = -sign;
                    if (arg[2].negative && (k & 1)) sign = -sign;
                    const Real phase = l * arg[0].phase + m * arg[1].phase + k * arg[2].phase;
                    term = mag * phase_factor(sign, all_real, phase);
                }
                shell += term;
                shell_mag += mag;
                shell_round += detail::term_rounding(mag, coef->lg_scale[idx]);
            }
        }
        if (!std::isfinite(shell_mag)) throw OverflowError("eval_trivariate: shell magnitude out of range");
        const bool poles_ahead = std::isfinite(min_order) && (q + 1) * min_order + p.delta <= 0;
        if (monitor.add(shell, shell_mag, shell_round, poles_ahead)) break;
        if (!std::isfinite(min_order)) {
            // Zero arguments: nothing beyond the first shell.
            monitor.mark_terminated();
            break;
        }
    }
    return monitor.result(SummationRoute::shells);
}

// Active orders as integer multiples of one step h.
struct Lattice {
    bool ok = false;
    Real step = 0;
    std::array<int, 3> mult{0, 0, 0};
};

constexpr int kMaxMultiplier = 64;

Lattice find_lattice(const std::array<Real, 3>& order, const std::array<bool, 3>& active) {
    Real smallest = std::numeric_limits<Real>::infinity();
    for (int i = 0; i < 3; ++i)
        if (active[i]) smallest = std::min(smallest, order[i]);
    Lattice lat;
    if (!std::isfinite(smallest)) return lat;
    // Orders typically arrive as rounded doubles; 1e-14 relative covers that.
    constexpr Real tol = 1e-14L;
    for (int m0 = 1; m0 <= kMaxMultiplier; ++m0) {
        const Real h = smallest / m0;
        bool fits = true;
        std::array<int, 3> mult{0, 0, 0};
        for (int i = 0; i < 3 && fits; ++i) {
            if (!active[i]) continue;
            const long long m = std::llround(order[i] / h);
            fits = m >= 1 && m <= kMaxMultiplier && std::fabs(order[i] - m * h) <= tol * order[i];
            mult[i] = static_cast<int>(m);
        }
        if (fits) {
            lat.ok = true;
            lat.step = h;
            lat.mult = mult;
            return lat;
        }
    }
    return lat;
}

// With commensurate orders the triple series collapses to
//   E = Σ_n g_n / Γ(n h + δ),  Σ_n g_n x^n = (1 - Σ_i z_i x^{m_i})^{-η},
// and the g_n obey n g_n = Σ_i z_i (n + (η - 1) m_i) g_{n - m_i}.
// The g_n are kept in a ring buffer with a shared exponent so that sums
// far beyond the double range stay representable.
EvalResult sum_graded(const MLParams& p, const std::array<Complex, 3>& z, const Lattice& lat,
                      const SeriesControl& ctrl) {
    int span = 0;
    for (int i = 0; i < 3; ++i)
        if (z[i] != Complex(0)) span = std::max(span, lat.mult[i]);
    std::vector<Complex> coef(static_cast<std::size_t>(span) + 1, Complex(0));
    for (int i = 0; i < 3; ++i)
        if (z[i] != Complex(0)) coef[lat.mult[i]] += z[i];
    std::vector<int> taps;
    for (int m = 1; m <= span; ++m)
        if (coef[m] != Complex(0)) taps.push_back(m);
    const bool all_real = std::all_of(z.begin(), z.end(), [](Complex c) { return c.imag() == 0; });

    ShellMonitor monitor(ctrl);
    if (taps.empty()) {
        const Real r = reciprocal_gamma(p.delta);
        monitor.add(Complex(r), std::fabs(r), detail::kEps * std::fabs(r), false);
        monitor.mark_terminated();
        return monitor.result(SummationRoute::graded);
    }

    const std::size_t ring = static_cast<std::size_t>(span) + 1;
    std::vector<Complex> g(ring, Complex(0));
    Real log_scale = 0;
    constexpr Real kBig = 1e200L;
    const Real kLogBig = std::log(kBig);
    g[0] = 1;

    Complex block{0, 0};
    Real block_mag = 0;
    Real block_round = 0;
    int in_block = 0;
    for (std::int64_t n = 0;; ++n) {
        if (n >= ctrl.max_graded_terms) break;
        const std::size_t slot = static_cast<std::size_t>(n % static_cast<std::int64_t>(ring));
        if (n > 0) {
            Complex acc{0, 0};
            for (int m : taps) {
                if (m > n) break;
                const std::size_t from = static_cast<std::size_t>((n - m) % static_cast<std::int64_t>(ring));
                acc += coef[m] * (static_cast<Real>(n) + (p.eta - 1) * m) * g[from];
            }
            g[slot] = acc / static_cast<Real>(n);
            if (all_real) g[slot].imag(0);
            if (std::abs(g[slot]) > kBig) {
                for (auto& c : g) c /= kBig;
                log_scale += kLogBig;
            }
        }
        const Real x = static_cast<Real>(n) * lat.step + p.delta;
        const SignedLog lg = signed_log_gamma(x);
        const Real gabs = std::abs(g[slot]);
        if (lg.sign != 0 && gabs > 0) {
            const Real log_mag = std::log(gabs) + log_scale - lg.log_abs;
            if (log_mag > kMaxLog) throw OverflowError("eval_trivariate: term magnitude out of range");
            const Real factor = lg.sign * std::exp(log_scale - lg.log_abs);
            const Complex term = g[slot] * factor;
            block += term;
            const Real mag = std::abs(term);
            block_mag += mag;
            // Each g_n inherits ~n ulps from the recurrence.
            block_round += detail::term_rounding(mag, lg.log_abs + log_scale) +
                           mag * detail::kEps * std::sqrt(static_cast<Real>(n) + 1);
        }
        if (++in_block == span) {
            const bool poles_ahead = static_cast<Real>(n + 1) * lat.step + p.delta <= 0;
            if (monitor.add(block, block_mag, block_round, poles_ahead)) break;
            block = 0;
            block_mag = 0;
            block_round = 0;
            in_block = 0;
            // Keep the ring away from underflow when the coefficients decay.
            Real biggest = 0;
            for (const auto& c : g) biggest = std::max(biggest, std::abs(c));
            if (biggest > 0 && biggest < 1 / kBig) {
                for (auto& c : g) c *= kBig;
                log_scale -= kLogBig;
            }
        }
    }
    return monitor.result(SummationRoute::graded);
}

}  // namespace

EvalResult eval_trivariate(const MLParams& params, Complex u, Complex v, Complex w, const SeriesControl& ctrl) {
    params.validate();
    ctrl.validate();
    const std::array<Complex, 3> z = {u, v, w};
    for (const auto& c : z)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("eval_trivariate: non-finite argument");

    const bool terminating = is_nonpositive_integer(params.eta);
    if (ctrl.route == SummationRoute::shells || terminating) {
        if (ctrl.route == SummationRoute::graded)
            throw DomainError("graded route unavailable for non-positive integer eta");
        return sum_shells(params, u, v, w, ctrl);
    }
    const std::array<bool, 3> active = {u != Complex(0), v != Complex(0), w != Complex(0)};
    const Lattice lat = find_lattice({params.alpha, params.beta, params.gamma}, active);
    if (ctrl.route == SummationRoute::graded) {
        if (!lat.ok && (active[0] || active[1] || active[2]))
            throw DomainError("graded route needs commensurate orders");
        return sum_graded(params, z, lat, ctrl);
    }
    if (lat.ok) return sum_graded(params, z, lat, ctrl);
    return sum_shells(params, u, v, w, ctrl);
}

EvalResult eval_univariate(const MLParams& params, const LambdaTriple& lam, Real r, const SeriesControl& ctrl) {
    params.validate();
    lam.validate();
    if (!(r >= 0) || !std::isfinite(r)) throw DomainError("eval_univariate: r must be non-negative");
    if (r == 0) {
        EvalResult res;
        res.converged = true;
        res.shells_used = 0;
        if (params.delta > 1) {
            res.value = 0;
        } else if (params.delta == 1) {
            res.value = 1;
        } else {
            throw DomainError("eval_univariate: r = 0 requires delta >= 1");
        }
        return res;
    }
    const Complex u = lam.lambda1 * std::pow(r, params.alpha);
    const Complex v = lam.lambda2 * std::pow(r, params.beta);
    const Complex w = lam.lambda3 * std::pow(r, params.gamma);
    EvalResult res = eval_trivariate(params, u, v, w, ctrl);
    const Real scale = std::pow(r, params.delta - 1);
    res.value *= scale;
    res.abs_error_estimate *= scale;
    if (!std::isfinite(res.value.real())) throw OverflowError("eval_univariate: value out of range");
    res.converged = res.converged && res.abs_error_estimate <= ctrl.rel_tol * std::max<Real>(std::abs(res.value), 1);
    return res;
}

}  // namespace triml
