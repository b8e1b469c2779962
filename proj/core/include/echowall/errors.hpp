#pragma once

#include <stdexcept>
#include <string>

namespace echowall {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A plane was given a zero normal vector.
class InvalidPlane : public Error {
 public:
  using Error::Error;
};

/// Mirror construction degenerated: the image point coincides with the
/// source, i.e. the wall would pass through the loudspeaker.
class DegenerateMirror : public Error {
 public:
  using Error::Error;
};

/// Microphones are affinely dependent (coplanar in 3D, collinear in 2D),
/// so trilateration and the matching relation are underdetermined.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// All distances vanish; no scale is available for residual normalization.
class DegenerateScale : public Error {
 public:
  using Error::Error;
};

/// The requested setup is outside the supported envelope
/// (e.g. a vehicle-mounted loudspeaker in a 3D scene).
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents or command-line arguments.
class BadInput : public Error {
 public:
  using Error::Error;
};

}  // namespace echowall
