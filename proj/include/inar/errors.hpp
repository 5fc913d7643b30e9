#pragma once

#include <stdexcept>
#include <string>

namespace inar {

// Base class for all recoverable pipeline errors. Subsystems throw the
// specific subtypes below; the CLI maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Geometry
class BehindCamera : public Error {
 public:
  explicit BehindCamera(const std::string& what = "point behind camera") : Error(what) {}
};
class BehindCameraMajority : public Error {
 public:
  explicit BehindCameraMajority(const std::string& what = "majority of points behind camera")
      : Error(what) {}
};
class DegenerateTriangulation : public Error {
 public:
  explicit DegenerateTriangulation(const std::string& what) : Error(what) {}
};
class DegenerateConfiguration : public Error {
 public:
  explicit DegenerateConfiguration(const std::string& what) : Error(what) {}
};
class CheiralityAmbiguous : public Error {
 public:
  explicit CheiralityAmbiguous(const std::string& what) : Error(what) {}
};
class InsufficientInliers : public Error {
 public:
  explicit InsufficientInliers(const std::string& what) : Error(what) {}
};

// SfM
class NoViablePair : public Error {
 public:
  explicit NoViablePair(const std::string& what) : Error(what) {}
};
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(what) {}
};

// Densification / classification
class ZeroVariance : public Error {
 public:
  explicit ZeroVariance(const std::string& what = "patch has zero variance") : Error(what) {}
};
class DegenerateNeighborhood : public Error {
 public:
  explicit DegenerateNeighborhood(const std::string& what) : Error(what) {}
};
class DegenerateFit : public Error {
 public:
  explicit DegenerateFit(const std::string& what) : Error(what) {}
};
class EmptyRegion : public Error {
 public:
  explicit EmptyRegion(const std::string& what = "no reconstructed points in region") : Error(what) {}
};

// Synthesis
class InvalidSpec : public Error {
 public:
  explicit InvalidSpec(const std::string& what) : Error(what) {}
};

// I/O
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};
class UnsupportedFormat : public IoError {
 public:
  explicit UnsupportedFormat(const std::string& what) : IoError(what) {}
};
class CorruptHeader : public IoError {
 public:
  explicit CorruptHeader(const std::string& what) : IoError(what) {}
};
class TruncatedPayload : public IoError {
 public:
  explicit TruncatedPayload(const std::string& what) : IoError(what) {}
};
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace inar
