#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "triml/types.hpp"

namespace triml::testing {

inline Real rel_err(Real got, Real want) {
    return std::fabs(got - want) / std::max(std::fabs(want), Real(1e-300L));
}

inline Real rel_err(Complex got, Complex want) {
    return std::abs(got - want) / std::max(std::abs(want), Real(1e-300L));
}

// Relative error against max(|want|, 1): the scale used by the tolerances
// of most criteria.
inline Real scaled_err(Complex got, Complex want) {
    return std::abs(got - want) / std::max<Real>(std::abs(want), 1);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Real uniform(Real lo, Real hi) {
        std::uniform_real_distribution<double> dist(static_cast<double>(lo), static_cast<double>(hi));
        return dist(engine_);
    }
    int integer(int lo, int hi) {
        std::uniform_int_distribution<int> dist(lo, hi);
        return dist(engine_);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace triml::testing
