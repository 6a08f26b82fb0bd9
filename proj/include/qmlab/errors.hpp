#pragma once

#include <stdexcept>
#include <string>

namespace qmlab {

/// Shape or size mismatch between operators, subsystems or scales.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input fails a mathematical precondition (not Hermitian, not PSD, not a POVM, ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A Fock-space truncation is too small for the requested computation.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two independent computation routes disagree beyond tolerance, or a
/// reconstructed object fails its defining residual check.
struct ReconstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qmlab
