#pragma once

#include <stdexcept>
#include <string>

namespace optagg {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two envelopes with different sample rate, center frequency or length.
struct GridMismatchError : Error {
    using Error::Error;
};

// An operation would wrap meaningful spectral content past the Nyquist edge.
struct AliasingError : Error {
    using Error::Error;
};

// Invalid parameter or scenario configuration. Maps to CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// Aggregation plan whose sidebands do not superimpose anywhere.
struct GeometryError : Error {
    using Error::Error;
};

// Noise calibration target cannot be met (e.g. below the implementation floor).
struct CalibrationError : Error {
    using Error::Error;
};

// Metric requested on clusters with no support.
struct InsufficientStatisticsError : Error {
    using Error::Error;
};

// Requested target format is not reachable from the parent formats.
struct InfeasibleTargetError : Error {
    using Error::Error;
};

// Any runtime failure inside the pipeline. Maps to CLI exit code 3.
struct PipelineError : Error {
    using Error::Error;
};

}  // namespace optagg
