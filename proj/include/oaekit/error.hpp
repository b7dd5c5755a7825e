#pragma once

#include <stdexcept>
#include <string>

namespace oaekit {

// Base of every error the toolkit throws on purpose. The subclasses map onto
// the command-line exit codes (see cli/commands.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on arguments or configuration was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A referenced file, segment or record does not exist.
class MissingInput : public Error {
 public:
  using Error::Error;
};

// A file parsed but does not follow its schema.
class SchemaViolation : public Error {
 public:
  using Error::Error;
};

// Processing could not produce a valid result (alignment, verification, ...).
class ProcessingFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace oaekit
