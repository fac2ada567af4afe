#pragma once

#include <stdexcept>
#include <string>

namespace benchpress {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad spec field, non-DAG input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file or string could not be parsed into the expected format.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace benchpress
