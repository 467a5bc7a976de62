#pragma once

#include <stdexcept>
#include <string>

namespace doubletopt {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Polygon operations produced a degenerate result that could not be repaired.
struct InvalidGeometry : Error {
    using Error::Error;
};

/// The groundwater field has no data covering the queried location.
struct FieldUnavailable : Error {
    using Error::Error;
};

/// Malformed input file; message carries line/feature context.
struct ParseError : Error {
    using Error::Error;
};

/// Input coordinates look geographic (lon/lat) instead of projected metric.
struct CrsError : Error {
    using Error::Error;
};

/// A parsed record violates a domain invariant; message names row and rule.
struct ValidationError : Error {
    using Error::Error;
};

/// Filesystem failure while writing results.
struct IoError : Error {
    using Error::Error;
};

/// The LP basis became singular beyond repair.
struct NumericalFailure : Error {
    using Error::Error;
};

/// A model was truly infeasible, which indicates a construction bug (the
/// empty installation is always feasible).
struct InfeasibleModel : Error {
    using Error::Error;
};

/// Brute-force enumeration would exceed the configured bound.
struct TooLarge : Error {
    using Error::Error;
};

}  // namespace doubletopt
