#pragma once

#include <stdexcept>
#include <string>

namespace posmap {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input shapes / encodings.
struct DimensionMismatch : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct MalformedSpec : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

// Numerical-contract violations.
struct NotHermitian : Error {
    using Error::Error;
};
struct NotCompletelyPositive : Error {
    using Error::Error;
};
struct InvalidState : Error {
    using Error::Error;
};

// Domain verdicts raised by constructors and checks.
struct BlockPositivityViolated : Error {
    using Error::Error;
};
struct ExtremalityConstraintViolated : Error {
    using Error::Error;
};
struct ConstraintViolated : Error {
    using Error::Error;
};
struct DegenerateParameter : Error {
    using Error::Error;
};
struct PatternMismatch : Error {
    using Error::Error;
};
struct NotInFace : Error {
    using Error::Error;
};
struct DegenerateGNS : Error {
    using Error::Error;
};
struct SplitInvalid : Error {
    using Error::Error;
};
struct MapNotScreened : Error {
    using Error::Error;
};

} // namespace posmap
