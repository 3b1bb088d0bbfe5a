#pragma once

#include <stdexcept>

namespace qsiam {

// Base class for every failure the library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };        // tensor dimension mismatch
struct ParamError : Error { using Error::Error; };        // invalid argument value
struct UnsupportedError : Error { using Error::Error; };  // layer shape outside the supported set
struct FoldingError : Error { using Error::Error; };      // PE/SIMD does not divide the layer
struct ContainerError : Error { using Error::Error; };    // malformed weight container
struct IngestError : Error { using Error::Error; };       // unreadable frame or dataset entry
struct FitError : Error { using Error::Error; };          // degenerate calibration fit
struct IoError : Error { using Error::Error; };           // filesystem failure

}  // namespace qsiam
