#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "series_detail.hpp"
#include "triml/fde.hpp"
#include "triml/special.hpp"

namespace triml {

namespace {

using detail::kEps;
using detail::kMaxLog;

// log Γ(μ0 + a l + b p + c k) and the step ratio Γ(x)/Γ(x + c).  When a, b, c
// are integer multiples of one step the values are tabulated by lattice
// index; otherwise every call goes to log_gamma.
class GammaLadder {
public:
    GammaLadder(Real mu0, Real a, Real b, Real c) : mu0_(mu0), a_(a), b_(b), c_(c) {
        constexpr Real tol = 1e-14L;
        for (int m = 1; m <= 64 && !lattice_; ++m) {
            const Real h = c / m;
            const long long ma = std::llround(a / h), mb = std::llround(b / h);
            if (ma < 1 || mb < 1 || ma > 4096 || mb > 4096) continue;
            if (std::fabs(a - ma * h) > tol * a || std::fabs(b - mb * h) > tol * b) continue;
            lattice_ = true;
            h_ = h;
            ma_ = ma;
            mb_ = mb;
            mc_ = m;
        }
    }

    Real log_gamma_at(std::int64_t l, std::int64_t p, std::int64_t k) {
        if (!lattice_) return log_gamma(mu0_ + a_ * l + b_ * p + c_ * k);
        const std::size_t j = index(l, p, k);
        grow(j);
        return lg_[j];
    }

    Real ratio(std::int64_t l, std::int64_t p, std::int64_t k) {
        if (!lattice_) {
            const Real x = mu0_ + a_ * l + b_ * p + c_ * k;
            return std::exp(log_gamma(x) - log_gamma(x + c_));
        }
        const std::size_t j = index(l, p, k);
        grow(j + mc_);
        return ratio_[j];
    }

    Real inverse_ratio(std::int64_t l, std::int64_t p, std::int64_t k) {
        if (!lattice_) return 1 / ratio(l, p, k);
        const std::size_t j = index(l, p, k);
        grow(j + mc_);
        return inverse_[j];
    }

    bool lattice() const { return lattice_; }
    std::int64_t k_stride() const { return mc_; }

    std::size_t index(std::int64_t l, std::int64_t p, std::int64_t k) const {
        return static_cast<std::size_t>(ma_ * l + mb_ * p + mc_ * k);
    }

    // Lattice only: ratio and inverse-ratio tables, rounded to double,
    // valid through index j.
    const double* ratio_table(std::size_t j) {
        grow(j + mc_);
        return ratio_d_.data();
    }
    const double* inverse_table(std::size_t j) {
        grow(j + mc_);
        return inverse_d_.data();
    }
    Real largest_log_gamma() const { return lg_.empty() ? 0 : std::fabs(lg_.back()); }

private:

    void grow(std::size_t j) {
        while (lg_.size() <= j) lg_.push_back(log_gamma(mu0_ + h_ * static_cast<Real>(lg_.size())));
        while (ratio_.size() + mc_ < lg_.size()) {
            const std::size_t i = ratio_.size();
            ratio_.push_back(std::exp(lg_[i] - lg_[i + mc_]));
            inverse_.push_back(std::exp(lg_[i + mc_] - lg_[i]));
            ratio_d_.push_back(static_cast<double>(ratio_.back()));
            inverse_d_.push_back(static_cast<double>(inverse_.back()));
        }
    }

    Real mu0_, a_, b_, c_;
    bool lattice_ = false;
    Real h_ = 0;
    std::int64_t ma_ = 0, mb_ = 0, mc_ = 0;
    std::vector<Real> lg_, ratio_, inverse_;
    std::vector<double> ratio_d_, inverse_d_;
};

class LogFactorial {
public:
    Real operator()(std::int64_t n) {
        while (static_cast<std::int64_t>(t_.size()) <= n) t_.push_back(t_.back() + std::log(static_cast<Real>(t_.size())));
        return t_[static_cast<std::size_t>(n)];
    }

private:
    std::vector<Real> t_{0};
};

class Reciprocal {
public:
    Real operator()(std::int64_t n) { return table(n)[n]; }

    const double* table(std::int64_t n) {
        while (static_cast<std::int64_t>(t_.size()) <= n) {
            t_.push_back(Real(1) / static_cast<Real>(t_.size()));
            d_.push_back(static_cast<double>(t_.back()));
        }
        return d_.data();
    }

private:
    std::vector<Real> t_{0};
    std::vector<double> d_{0};
};

struct BlockPeak {
    std::int64_t l, p, k;
    Real log_mag;
};

constexpr std::size_t kMaxBlocks = 4'000'000;

// Up and down term chains of one block for every ladder, on a lattice where
// all ladders share the index j.  The scaled terms lie in [floor, 1], so the
// chains run in double; block totals go back to Real.  Returns the number of
// steps taken.
std::int64_t lattice_chains(std::vector<GammaLadder>& lg, std::int64_t l, std::int64_t p, std::int64_t k0, Real x,
                            Real floor, const std::vector<Real>& t0, std::vector<Real>& sum, std::vector<Real>& mag,
                            Reciprocal& inv) {
    constexpr std::size_t kMaxLadders = 3;
    const std::size_t nv = lg.size();
    const std::int64_t d = l + p;
    const std::size_t mc = static_cast<std::size_t>(lg[0].k_stride());
    const double xd = static_cast<double>(x), rxd = static_cast<double>(1 / x), fl = static_cast<double>(floor);
    std::array<const double*, kMaxLadders> table{};
    std::array<double, kMaxLadders> t{}, s{}, m{};
    std::int64_t steps = 0;

    const std::size_t j0 = lg[0].index(l, p, k0);
    std::size_t j = j0, limit = 0;
    const double* rec = nullptr;
    std::int64_t rec_limit = 0;
    auto refresh_up = [&](std::int64_t k) {
        limit = j + 1024 * mc;
        for (std::size_t v = 0; v < nv; ++v) table[v] = lg[v].ratio_table(limit);
        rec_limit = k + 1025;
        rec = inv.table(rec_limit);
    };
    refresh_up(k0);
    for (std::size_t v = 0; v < nv; ++v) t[v] = static_cast<double>(t0[v]);
    for (std::int64_t k = k0;; ++k, ++steps, j += mc) {
        if (j >= limit || k + 1 >= rec_limit) refresh_up(k);
        const double f = static_cast<double>(d + k + 1) * rec[k + 1] * xd;
        bool small = true;
        for (std::size_t v = 0; v < nv; ++v) {
            t[v] *= f * table[v][j];
            s[v] += t[v];
            m[v] += std::fabs(t[v]);
            small = small && std::fabs(t[v]) < fl;
        }
        if (small) break;
    }
    j = j0;
    for (std::size_t v = 0; v < nv; ++v) {
        table[v] = lg[v].inverse_table(j);
        t[v] = static_cast<double>(t0[v]);
    }
    rec = inv.table(d + k0);
    for (std::int64_t k = k0; k > 0; --k, ++steps) {
        j -= mc;  // index of k - 1
        const double f = static_cast<double>(k) * rec[d + k] * rxd;
        bool small = true;
        for (std::size_t v = 0; v < nv; ++v) {
            t[v] *= f * table[v][j];
            s[v] += t[v];
            m[v] += std::fabs(t[v]);
            small = small && std::fabs(t[v]) < fl;
        }
        if (small) break;
    }
    for (std::size_t v = 0; v < nv; ++v) {
        sum[v] += s[v];
        mag[v] += m[v];
    }
    return steps;
}

// S(μ0) = Σ_{l,p} λ1^l λ2^p / (l! p!) z^{a l + b p}
//         1Ψ1[(l+p+1, 1); (μ0 + a l + b p, c) | λ3 z^c]
// with a = α, b = α-γ, c = α-β, for several μ0 at once.
//
// Pass one finds the log of the largest term of every (l, p) block of the
// first μ0 and stops each direction once blocks fall `cut` below the running
// maximum.  Pass two sums each surviving block outward from that peak, one
// term chain per μ0, in units of the global maximum.
std::vector<EvalResult> block_sums(const IVPSpec& s, Real z, const std::vector<Real>& mu0, const SeriesControl& ctrl) {
    const Real a = s.alpha, b = s.alpha - s.gamma, c = s.alpha - s.beta;
    const std::size_t nv = mu0.size();
    std::vector<EvalResult> out(nv);
    if (z == 0) {
        for (std::size_t v = 0; v < nv; ++v) {
            out[v].value = reciprocal_gamma(mu0[v]);
            out[v].converged = true;
        }
        return out;
    }
    const Real x = s.lambda3 * std::pow(z, c);
    const bool has1 = s.lambda1 != 0, has2 = s.lambda2 != 0, has3 = x != 0;
    const Real log1 = has1 ? std::log(std::fabs(s.lambda1)) : 0;
    const Real log2 = has2 ? std::log(std::fabs(s.lambda2)) : 0;
    const Real logx = has3 ? std::log(std::fabs(x)) : 0;
    const Real logz = std::log(z);
    const Real cut = -std::log(ctrl.rel_tol) + 5;
    std::vector<GammaLadder> lg;
    for (Real m : mu0) lg.emplace_back(m, a, b, c);
    LogFactorial lf;
    Reciprocal inv;

    auto climbs = [&](std::int64_t d, std::int64_t l, std::int64_t p, std::int64_t k) {
        return Real(d + k + 1) * inv(k + 1) * std::fabs(x) * lg[0].ratio(l, p, k) >= 1;
    };
    auto peak_k = [&](std::int64_t l, std::int64_t p, std::int64_t k) -> std::int64_t {
        if (!has3) return 0;
        const std::int64_t d = l + p;
        while (climbs(d, l, p, k)) ++k;
        while (k > 0 && !climbs(d, l, p, k - 1)) --k;
        return k;
    };
    // log of |term| without the gamma factor
    auto log_head = [&](std::int64_t l, std::int64_t p, std::int64_t k) {
        return l * log1 + p * log2 - lf(l) - lf(p) + (a * l + b * p) * logz + lf(l + p + k) - lf(k) + k * logx;
    };

    std::vector<BlockPeak> blocks;
    Real gmax = -std::numeric_limits<Real>::infinity();
    std::int64_t l_best = 0, k_row = 0;
    bool budget_hit = false;
    for (std::int64_t l = 0; !budget_hit; ++l) {
        if (l > 0 && !has1) break;
        Real row_max = -std::numeric_limits<Real>::infinity();
        std::int64_t p_best = 0, k = k_row;
        for (std::int64_t p = 0;; ++p) {
            if (p > 0 && !has2) break;
            k = peak_k(l, p, k);
            if (p == 0) k_row = k;
            const Real lm = log_head(l, p, k) - lg[0].log_gamma_at(l, p, k);
            blocks.push_back({l, p, k, lm});
            if (lm > row_max) {
                row_max = lm;
                p_best = p;
            }
            if (lm > gmax) {
                gmax = lm;
                l_best = l;
            }
            if (p > p_best && lm < gmax - cut) break;
            if (blocks.size() >= kMaxBlocks) {
                budget_hit = true;
                break;
            }
        }
        if (l > l_best && row_max < gmax - cut) break;
    }
    if (gmax > kMaxLog) throw OverflowError("fox-wright block sum exceeds the range of Real");

    const Real floor = std::exp(-cut);
    std::vector<Real> sum(nv, 0), mag(nv, 0), t0(nv), t(nv);
    const bool lattice = lg[0].lattice();
    // each summed block is cut at two chain ends, below floor
    std::int64_t terms = 0, longest = 0, summed = 0;
    for (const BlockPeak& blk : blocks) {
        if (blk.log_mag < gmax - cut) continue;
        const std::int64_t l = blk.l, p = blk.p, d = l + p;
        const bool negative = ((l % 2 == 1) && s.lambda1 < 0) != ((p % 2 == 1) && s.lambda2 < 0);
        const bool flip_x = x < 0 && blk.k % 2 == 1;
        const Real sign = negative != flip_x ? -1 : 1;
        ++summed;
        const Real head = log_head(l, p, blk.k) - gmax;
        for (std::size_t v = 0; v < nv; ++v) {
            t0[v] = sign * std::exp(head - lg[v].log_gamma_at(l, p, blk.k));
            sum[v] += t0[v];
            mag[v] += std::fabs(t0[v]);
        }
        if (!has3) continue;
        std::int64_t steps = 0;
        if (lattice) {
            steps = lattice_chains(lg, l, p, blk.k, x, floor, t0, sum, mag, inv);
        } else {
            t = t0;
            for (std::int64_t k = blk.k;; ++k, ++steps) {
                const Real f = Real(d + k + 1) * inv(k + 1) * x;
                bool small = true;
                for (std::size_t v = 0; v < nv; ++v) {
                    t[v] *= f * lg[v].ratio(l, p, k);
                    sum[v] += t[v];
                    mag[v] += std::fabs(t[v]);
                    small = small && std::fabs(t[v]) < floor;
                }
                if (small) break;
            }
            t = t0;
            for (std::int64_t k = blk.k; k > 0; --k, ++steps) {
                const Real f = Real(k) * inv(d + k) / x;
                bool small = true;
                for (std::size_t v = 0; v < nv; ++v) {
                    t[v] *= f * lg[v].inverse_ratio(l, p, k - 1);
                    sum[v] += t[v];
                    mag[v] += std::fabs(t[v]);
                    small = small && std::fabs(t[v]) < floor;
                }
                if (small) break;
            }
        }
        terms += steps + 1;
        longest = std::max(longest, steps);
    }
    const Real scale = std::exp(gmax);
    for (std::size_t v = 0; v < nv; ++v) {
        out[v].value = sum[v] * scale;
        // A chain of n ratio products carries n independent roundings: the
        // table entry (relative to the log-gamma values differenced) and, on a
        // lattice, the double arithmetic.  They add up like a random walk.
        const Real per_step = kEps * (1 + lg[v].largest_log_gamma()) +
                              (lattice ? std::numeric_limits<double>::epsilon() : 0);
        out[v].abs_error_estimate =
            (4 * per_step * mag[v] * std::sqrt(static_cast<Real>(longest + 16)) + floor * static_cast<Real>(16 * summed)) * scale;
        out[v].shells_used = static_cast<int>(std::min<std::size_t>(blocks.size(), std::numeric_limits<int>::max()));
        out[v].converged = !budget_hit;
        out[v].route = SummationRoute::shells;
    }
    return out;
}

}  // namespace

EvalResult homogeneous_via_fox_wright(const IVPSpec& spec, Real r, const SeriesControl& ctrl) {
    spec.validate();
    ctrl.validate();
    if (!(r >= 0) || !std::isfinite(r)) throw DomainError("homogeneous_via_fox_wright: requires r >= 0");
    const Real a = spec.alpha - spec.gamma, c = spec.alpha - spec.beta;
    // y = y0 (S(1) - λ3 r^{α-β} S(1 + α-β) - λ2 r^{α-γ} S(1 + α-γ))
    const std::vector<EvalResult> sums = block_sums(spec, r, {1, 1 + c, 1 + a}, ctrl);
    const EvalResult &s0 = sums[0], &s3 = sums[1], &s2 = sums[2];
    const Real w3 = spec.lambda3 * std::pow(r, c), w2 = spec.lambda2 * std::pow(r, a);
    EvalResult out;
    out.value = spec.y0 * (s0.value - w3 * s3.value - w2 * s2.value);
    out.abs_error_estimate = std::fabs(spec.y0) * (s0.abs_error_estimate + std::fabs(w3) * s3.abs_error_estimate +
                                                   std::fabs(w2) * s2.abs_error_estimate);
    out.shells_used = s0.shells_used + s3.shells_used + s2.shells_used;
    out.converged = s0.converged && s3.converged && s2.converged;
    return out;
}

EvalResult kernel_via_fox_wright(const IVPSpec& spec, Real z, const SeriesControl& ctrl) {
    spec.validate();
    ctrl.validate();
    if (!(z >= 0) || !std::isfinite(z)) throw DomainError("kernel_via_fox_wright: requires z >= 0");
    return block_sums(spec, z, {spec.alpha}, ctrl).front();
}

}  // namespace triml
