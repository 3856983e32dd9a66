#pragma once

#include <stdexcept>
#include <string>

namespace marketeq {

// Error taxonomy mirrors the CLI exit codes:
//   invalid input -> 2, numeric failure -> 3, verification failure -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Distribution spec string does not parse.
class InvalidSpecError : public Error {
public:
    using Error::Error;
};

// Parameter outside its valid range (rates <= 0, mass outside (0,1), ...).
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// Pointwise evaluation has no defined value (hazard at cdf=1, virtual value at pdf=0).
class UndefinedValueError : public Error {
public:
    using Error::Error;
};

// Quadrature non-convergence, dual-route disagreement, iteration limits.
class NumericFailure : public Error {
public:
    using Error::Error;
};

class VerificationFailure : public Error {
public:
    using Error::Error;
};

}  // namespace marketeq
