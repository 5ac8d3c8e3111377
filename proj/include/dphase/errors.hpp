#pragma once

#include <stdexcept>
#include <string>

namespace dphase {

// Base for all library errors. Subclasses map to CLI exit codes:
// gate_refused -> 2, everything else -> 3.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An inner region is not compactly contained in the outer one.
struct containment_error : error {
    using error::error;
};

// A scalar parameter is outside its admissible range (kappa <= 0, r <= 1, ...).
struct parameter_error : error {
    using error::error;
};

// A validated hypothesis failed (polynomial negative on [0,T], derivative
// window violated, ...).
struct hypothesis_error : error {
    using error::error;
};

// An exponent gate does not hold; the run is refused, not attempted.
struct gate_refused : error {
    using error::error;
};

// Bad run configuration (delta out of range, non-finite competitor energy, ...).
struct config_error : error {
    using error::error;
};

// Unknown catalog entry.
struct catalog_error : error {
    using error::error;
};

} // namespace dphase
