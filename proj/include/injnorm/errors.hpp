#pragma once

#include <stdexcept>
#include <string>

namespace injnorm {

/// Shape / precondition violations on tensor and vector arguments.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed external input (files, JSON documents, CLI values).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Desk-scale guard trips (instance too large for the requested operation).
class GuardError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace injnorm
