#pragma once

#include <stdexcept>
#include <string>

namespace thirsty {

/// Base class for all error conditions raised by the library. Catching this
/// is sufficient to intercept anything thrown below; each subclass maps to a
/// distinct process exit code in the CLI.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or out-of-range input: bad field values, violated ranges,
/// inconsistent units. Exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A lookup failed: unknown source name, missing parameter set, ambiguous
/// match. Exit code 3.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// Filesystem or serialization failure. Exit code 4.
class IoError : public Error {
public:
  using Error::Error;
};

/// Time series could not be brought onto a common grid: empty overlap,
/// incompatible steps, stale forward-fill. Exit code 5.
class AlignmentError : public Error {
public:
  using Error::Error;
};

} // namespace thirsty
