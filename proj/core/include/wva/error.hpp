#pragma once

#include <stdexcept>
#include <string>

namespace wva {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Geometry or temperature leaves the structure without the requested guided mode.
class NotGuiding : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class UndefinedSignal : public Error {
public:
    using Error::Error;
};

class DivergentInformation : public Error {
public:
    using Error::Error;
};

}  // namespace wva
