#pragma once

#include <stdexcept>
#include <string>

namespace dmapper {

// Base for every failure raised by the library. The CLI maps the three
// subclasses onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration fields.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or out-of-contract input data (parse failures, bad shapes, ...).
class DataError : public Error {
public:
    using Error::Error;
};

// Numerical breakdown (non-finite likelihood, no usable replicate, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace dmapper
