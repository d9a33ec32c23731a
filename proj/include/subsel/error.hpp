#pragma once

#include <stdexcept>
#include <string>

namespace subsel {

/// Invalid arguments or malformed input (CLI exit code 2).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed or a structural identity did not hold
/// (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace subsel
