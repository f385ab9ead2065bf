#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace triml {

// Extended precision is not optional: solutions of the three-order problem
// routinely leave the double range (exp(5000 r) growth is typical).
using Real = long double;
using Complex = std::complex<Real>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain, or an invalid parameter set.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Truncated series, quadrature or inversion did not meet its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A magnitude left the representable range of Real.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A denominator (transform bracket, time-step coefficient) vanished.
class SingularityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace triml
