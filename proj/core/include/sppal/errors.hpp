#pragma once

#include <stdexcept>
#include <string>

namespace sppal {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Quadrature or root finding failed to meet its budget.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Requested geometry cannot be realized.
class InfeasibleDesign : public Error {
public:
    using Error::Error;
};

// Frequency response lacks two interior peaks.
class NoDualResonance : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace sppal
