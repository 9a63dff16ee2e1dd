#pragma once

#include <stdexcept>
#include <string>

namespace aim {

// Error taxonomy shared across the toolkit. The CLI maps these onto exit
// codes: usage -> 1, data/parse -> 2, numeric -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };        // incompatible dimensions
struct DomainError : Error { using Error::Error; };       // value outside math domain
struct TapeError : Error { using Error::Error; };         // tensor not on expected tape
struct EmptyInputError : Error { using Error::Error; };   // empty sequence where >=1 needed
struct ConfigError : Error { using Error::Error; };       // inconsistent configuration
struct DataError : Error { using Error::Error; };         // missing/inconsistent data
struct EvalError : Error { using Error::Error; };         // metric undefined on the input
struct DegenerateError : Error { using Error::Error; };   // zero-variance statistic
struct ParseError : Error { using Error::Error; };        // malformed input file

} // namespace aim
