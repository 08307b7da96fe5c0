#pragma once

#include <stdexcept>
#include <string>

namespace rtsusp {

// base of every library error; messages name the offending task id and
// field whenever one exists
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// arithmetic left the representable range; results never wrap silently
class OverflowError : public Error {
public:
    using Error::Error;
};

// a task set, scenario or trace breaks a model invariant
class ValidationError : public Error {
public:
    using Error::Error;
};

// malformed input file or JSON text
class InputError : public Error {
public:
    using Error::Error;
};

// rank, index or interval outside its domain
class RangeError : public Error {
public:
    using Error::Error;
};

} // namespace rtsusp
