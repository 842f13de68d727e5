#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the supported domain of a function.
struct DomainError : Error {
    using Error::Error;
};

// A series or quadrature did not converge before its hard cap.
struct TruncationError : Error {
    using Error::Error;
};

// Round-trip block is not contractive (Cholesky of 1 - M failed).
struct NonPhysicalKernel : Error {
    using Error::Error;
};

// Request exceeds what an oracle is built to handle.
struct CapabilityError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace casimir
