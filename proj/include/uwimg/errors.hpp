#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uwimg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched raster dimensions between inputs that must agree.
struct ShapeError : Error {
  using Error::Error;
};

// A parameter outside its documented domain (negative coefficient, bad
// loss kind, even patch size, ...).
struct InvalidParameter : Error {
  using Error::Error;
};

// Input data violating a precondition (NaN depth, all-zero depth map,
// image smaller than a filter window, ...).
struct InvalidInput : Error {
  using Error::Error;
};

// Filesystem or codec failure; message names the offending path.
struct IoError : Error {
  using Error::Error;
};

// File parsed but has an unsupported layout (bit depth, color type).
struct FormatError : Error {
  using Error::Error;
};

// Iterative inversion hit non-finite values; carries the loss trace up to
// the failure point.
struct DescentFailure : Error {
  std::vector<double> trace;
  DescentFailure(const std::string& what, std::vector<double> t)
      : Error(what), trace(std::move(t)) {}
};

}  // namespace uwimg
