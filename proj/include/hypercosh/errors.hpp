#pragma once

#include <stdexcept>
#include <string>

namespace hypercosh {

/// Malformed or out-of-contract input (bad file, dimension mismatch, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical kernel left its validated envelope (non-convergence,
/// overflow, violated interlacing).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A run finished but its direct certification check failed.
struct CertificationError : std::runtime_error {
    double achieved;
    double required;
    CertificationError(const std::string& what, double achieved_, double required_)
        : std::runtime_error(what), achieved(achieved_), required(required_) {}
};

}  // namespace hypercosh
