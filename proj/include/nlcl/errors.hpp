#pragma once

#include <stdexcept>
#include <string>

namespace nlcl {

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Raised when fields that must share a mesh do not.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid or inconsistent configuration (maps to CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time step produced a negative density below tolerance.
class StepRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A monitored bound was exceeded (maps to CLI exit code 2).
class DiagnosticFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system failure (maps to CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nlcl
