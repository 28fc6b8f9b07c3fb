#pragma once

#include <stdexcept>
#include <string>

namespace ofifs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPoint : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// An affine image landed outside the grid rectangle.
class MapOutOfGrid : public Error {
 public:
  using Error::Error;
};

/// An iteration did not settle within its step budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class EmptyCut : public Error {
 public:
  using Error::Error;
};

/// Some support point has no (w, y) witness pair: the fuzzy set is outside
/// the class the orbital theory applies to.
class ClassMembershipError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ofifs
