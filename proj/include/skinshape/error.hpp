#pragma once

#include <stdexcept>
#include <string>

namespace skinshape {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decoding failures, unsupported formats and undersized inputs.
class ImageError : public Error {
 public:
  using Error::Error;
};

/// Region too small or too thin to yield a closed outer contour.
class DegenerateBoundary : public Error {
 public:
  DegenerateBoundary() : Error("degenerate boundary") {}
};

/// First Fourier coefficient vanishes, so scale normalization is undefined.
class DegenerateContour : public Error {
 public:
  DegenerateContour() : Error("degenerate contour") {}
};

/// Training labels contain a single class.
class DegenerateLabels : public Error {
 public:
  DegenerateLabels() : Error("degenerate labels") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

}  // namespace skinshape
