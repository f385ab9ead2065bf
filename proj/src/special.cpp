#include "triml/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace triml {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kEulerGamma = std::numbers::egamma_v<Real>;
constexpr Real kLogPi = 1.1447298858494001741434273513530587116L;

// Lanczos approximation, 17 terms, g tuned for a 64-bit significand.
// Γ(z) ~ ((z + g - 1/2)/e)^(z - 1/2) * num(z)/den(z).
constexpr Real kLanczosG = 12.2252227365970611572265625L;

constexpr std::array<Real, 17> kLanczosNum = {
    2715894658327.717377557655133124376674911L,
    3590179526097.912105038525528721129550434L,
    2223966599737.814969312127353235818710172L,
    856940834518.9562481809925866825485883417L,
    229885871668.749072933597446453399395469L,
    45526171687.54610815813502794395753410032L,
    6884887713.165178784550917647709216424823L,
    811048596.1407531864760282453852372777439L,
    75213915.96540822314499613623119501704812L,
    5509245.417224265151697527957954952830126L,
    317673.5368435419126714931842182369574221L,
    14268.27989845035520147014373320337523596L,
    489.3618720403263670213909083601787814792L,
    12.38941330038454449295883217865458609584L,
    0.2183627389504614963941574507281683147897L,
    0.002393749522058449186690627996063983095463L,
    0.1229541408909435212800785616808830746135e-4L,
};

constexpr std::array<Real, 17> kLanczosDen = {
    0.0L,
    1307674368000.0L,
    4339163001600.0L,
    6165817614720.0L,
    5056995703824.0L,
    2706813345600.0L,
    1009672107080.0L,
    272803210680.0L,
    54631129553.0L,
    8207628000.0L,
    928095740.0L,
    78558480.0L,
    4899622.0L,
    218400.0L,
    6580.0L,
    120.0L,
    1.0L,
};

Real lanczos_sum_scaled(Real z) {
    Real num = 0;
    Real den = 0;
    if (z <= 1) {
        for (std::size_t i = kLanczosNum.size(); i-- > 0;) {
            num = num * z + kLanczosNum[i];
            den = den * z + kLanczosDen[i];
        }
    } else {
        const Real zi = 1 / z;
        for (std::size_t i = 0; i < kLanczosNum.size(); ++i) {
            num = num * zi + kLanczosNum[i];
            den = den * zi + kLanczosDen[i];
        }
    }
    return num / den;
}

// zeta(2..kZetaMax) by Euler-Maclaurin, for the Taylor series of
// ln Γ(1 + e) = -γe + Σ_{k≥2} ζ(k)(-e)^k/k.
constexpr int kZetaMax = 48;

std::array<Real, kZetaMax + 1> make_zeta_table() {
    constexpr std::array<Real, 9> bernoulli = {
        1.0L / 6,      -1.0L / 30,      1.0L / 42,  -1.0L / 30, 5.0L / 66,
        -691.0L / 2730, 7.0L / 6, -3617.0L / 510, 43867.0L / 798,
    };
    constexpr int n = 20;
    std::array<Real, kZetaMax + 1> zeta{};
    for (int s = 2; s <= kZetaMax; ++s) {
        Real sum = 0;
        for (int j = n - 1; j >= 1; --j) sum += std::pow(static_cast<Real>(j), -static_cast<Real>(s));
        const Real big_n = n;
        sum += std::pow(big_n, 1.0L - s) / (s - 1) + std::pow(big_n, -static_cast<Real>(s)) / 2;
        // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
        Real rising = s;
        Real fact = 2;
        Real power = std::pow(big_n, -static_cast<Real>(s) - 1);
        for (int j = 1; j <= static_cast<int>(bernoulli.size()); ++j) {
            sum += bernoulli[j - 1] / fact * rising * power;
            rising *= static_cast<Real>(s + 2 * j - 1) * static_cast<Real>(s + 2 * j);
            fact *= static_cast<Real>(2 * j + 1) * static_cast<Real>(2 * j + 2);
            power /= big_n * big_n;
        }
        zeta[s] = sum;
    }
    return zeta;
}

const std::array<Real, kZetaMax + 1>& zeta_table() {
    static const std::array<Real, kZetaMax + 1> table = make_zeta_table();
    return table;
}

// ln Γ(1 + e), |e| <= 1/4.
Real log_gamma_1p(Real e) {
    const auto& zeta = zeta_table();
    Real sum = 0;
    Real power = -e;
    for (int k = 2; k <= kZetaMax; ++k) {
        power *= -e;
        const Real term = zeta[k] * power / k;
        sum += term;
        if (std::fabs(term) <= std::numeric_limits<Real>::epsilon() * 1e-3L * std::fabs(sum)) break;
    }
    return sum - kEulerGamma * e;
}

Real log_gamma_positive(Real x) {
    if (x < 0.75L) return log_gamma_positive(x + 1) - std::log(x);
    if (x <= 1.25L) return log_gamma_1p(x - 1);
    if (x >= 1.75L && x <= 2.25L) return log_gamma_1p(x - 2) + std::log1p(x - 2);
    const Real zgh = x + kLanczosG - 0.5L;
    return (x - 0.5L) * (std::log(zgh) - 1) + std::log(lanczos_sum_scaled(x));
}

}  // namespace

bool is_nonpositive_integer(Real x) {
    return x <= 0 && x == std::nearbyint(x);
}

Real sin_pi(Real x) {
    if (x == std::nearbyint(x)) return 0;
    // Reduce to r in [-1, 1], then to [-1/2, 1/2] around the nearest zero.
    Real r = std::fmod(x, 2.0L);
    if (r > 1) r -= 2;
    if (r < -1) r += 2;
    if (r > 0.5L) return std::sin(kPi * (1 - r));
    if (r < -0.5L) return -std::sin(kPi * (1 + r));
    return std::sin(kPi * r);
}

Real log_gamma(Real x) {
    if (!(x > 0)) throw DomainError("log_gamma: argument must be positive");
    if (std::isinf(x)) return x;
    return log_gamma_positive(x);
}

SignedLog signed_log_gamma(Real x) {
    if (x > 0) return {log_gamma_positive(x), 1};
    if (is_nonpositive_integer(x)) return {std::numeric_limits<Real>::infinity(), 0};
    // Γ(x) Γ(1-x) = π / sin(πx)
    const Real s = sin_pi(x);
    return {kLogPi - std::log(std::fabs(s)) - log_gamma_positive(1 - x), s > 0 ? 1 : -1};
}

Real reciprocal_gamma(Real x) {
    if (is_nonpositive_integer(x)) return 0;
    if (x > 0) return std::exp(-log_gamma_positive(x));
    // 1/Γ(x) = Γ(1-x) sin(πx)/π; sin_pi keeps the zeros exact.
    return std::exp(log_gamma_positive(1 - x) - kLogPi) * sin_pi(x);
}

SignedLog log_pochhammer(Real eta, std::uint64_t m) {
    if (m == 0) return {0, 1};
    if (is_nonpositive_integer(eta) && static_cast<Real>(m) > -eta)
        return {-std::numeric_limits<Real>::infinity(), 0};
    const SignedLog top = signed_log_gamma(eta + static_cast<Real>(m));
    const SignedLog bottom = signed_log_gamma(eta);
    if (bottom.sign == 0) {
        // eta a non-positive integer and the product stops short of zero:
        // (eta)_m = (-1)^m (-eta)! / (-eta-m)!
        const Real n = -eta;
        const Real k = n - static_cast<Real>(m);
        const int sign = (m % 2 == 0) ? 1 : -1;
        return {log_gamma_positive(n + 1) - log_gamma_positive(k + 1), sign};
    }
    return {top.log_abs - bottom.log_abs, top.sign * bottom.sign};
}

Real pochhammer(Real eta, std::uint64_t m) {
    if (m <= 64) {
        Real product = 1;
        for (std::uint64_t i = 0; i < m; ++i) product *= eta + static_cast<Real>(i);
        if (!std::isfinite(product)) throw OverflowError("pochhammer: result out of range");
        return product;
    }
    const SignedLog lp = log_pochhammer(eta, m);
    if (lp.sign == 0) return 0;
    if (lp.log_abs > std::log(std::numeric_limits<Real>::max()))
        throw OverflowError("pochhammer: result out of range");
    return lp.sign * std::exp(lp.log_abs);
}

Real beta(Real c, Real d) {
    if (!(c > 0 && d > 0)) throw DomainError("beta: both arguments must be positive");
    return std::exp(log_gamma_positive(c) + log_gamma_positive(d) - log_gamma_positive(c + d));
}

}  // namespace triml
