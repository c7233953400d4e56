#pragma once

#include <stdexcept>
#include <string>

namespace vortexstir {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the admissible parameter or phase domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation or trajectory point entered the exclusion ball of the
/// vortex or of its image.
class SingularityProximity : public Error {
public:
    using Error::Error;
};

/// A frame transformation needed a time tag that the state did not carry.
class MissingTimeTag : public Error {
public:
    using Error::Error;
};

/// The adaptive integrator could not meet the requested tolerance.
class StepFailure : public Error {
public:
    using Error::Error;
};

/// The orbit did not close: it left the period annulus, approached a
/// saddle, or exceeded the return-time cap.
class NotClosed : public Error {
public:
    using Error::Error;
};

/// The parameters do not admit a non-degenerate center.
class NotACenter : public Error {
public:
    using Error::Error;
};

/// Winding-number sampling too coarse to round safely.
class AmbiguousWinding : public Error {
public:
    using Error::Error;
};

/// A fixed-point iteration failed to converge from the given seed.
class NoConvergence : public Error {
public:
    using Error::Error;
};

} // namespace vortexstir
