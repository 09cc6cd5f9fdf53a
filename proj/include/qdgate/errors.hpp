#pragma once

#include <stdexcept>
#include <string>

namespace qdgate {

// Error taxonomy used across the library. Validation problems reuse the
// standard exceptions (std::invalid_argument, std::domain_error); the types
// below mark failures of the numerical machinery itself so callers can map
// them to distinct exit codes.

struct integration_failure : std::runtime_error {
    double norm_drift;
    explicit integration_failure(const std::string& msg, double drift = 0.0)
        : std::runtime_error(msg), norm_drift(drift) {}
};

struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rabi-frequency extraction could not find an oscillation to fit.
struct extraction_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scalar pulse-width calibration found no interior maximum in the bracket.
// Carries the objective values at the bracket endpoints so the caller can see
// which way the landscape slopes.
struct calibration_failure : std::runtime_error {
    double f_lo, f_hi;
    calibration_failure(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), f_lo(lo), f_hi(hi) {}
};

} // namespace qdgate
