#pragma once

#include <stdexcept>
#include <string>

namespace epshull {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scene parsing / validation
struct SyntaxError : Error {
  int line;
  SyntaxError(int line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};
struct ValidationError : Error {
  using Error::Error;
};

// Geometry
struct ConcentricEqual : Error {
  ConcentricEqual() : Error("circles coincide: infinite intersection") {}
};
struct DomainError : Error {
  using Error::Error;
};

// Boundary / topology
struct DegenerateScene : Error {
  using Error::Error;
};
struct NotOnBoundary : Error {
  using Error::Error;
};
struct NoGraphRepresentation : Error {
  using Error::Error;
};
struct TraversalStuck : Error {
  using Error::Error;
};
struct OracleMismatch : Error {
  using Error::Error;
};
struct InequalityViolation : Error {
  using Error::Error;
};
struct EmptyInput : Error {
  using Error::Error;
};

// Breach of an internal invariant (a bug, not a user error).
struct InternalError : Error {
  using Error::Error;
};

}  // namespace epshull
