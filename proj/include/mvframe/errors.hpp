#pragma once

#include <stdexcept>
#include <string>

namespace mvframe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched SpaceSpec / matrix shapes between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Requested construction is outside the supported shape family (e.g. a
// canonical basis with s not dividing r).
class ShapeError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

class SingularOperatorError : public Error {
 public:
  SingularOperatorError(const std::string& what, double sigma_min)
      : Error(what), sigma_min(sigma_min) {}
  double sigma_min;
};

class IterationError : public Error {
 public:
  IterationError(const std::string& what, double residual, int iterations)
      : Error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

class NormConditionError : public Error {
 public:
  NormConditionError(const std::string& what, double norm)
      : Error(what), norm(norm) {}
  double norm;
};

class ZeroOperatorError : public Error {
 public:
  using Error::Error;
};

// Configuration rejected before any computation; `path` points at the
// offending field, JSON-pointer style (e.g. "/params/n").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string path)
      : Error(what), path(std::move(path)) {}
  std::string path;
};

}  // namespace mvframe
