#pragma once

#include <stdexcept>
#include <string>

namespace vjm {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the command-line front end.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

#define VJM_DEFINE_ERROR(Name, tag)                                  \
  class Name : public Error {                                        \
  public:                                                            \
    explicit Name(const std::string& what) : Error(what) {}          \
    const char* kind() const noexcept override { return tag; }       \
  }

VJM_DEFINE_ERROR(InvalidArgument, "invalid-argument");
VJM_DEFINE_ERROR(SingularOrientation, "singular-orientation");
VJM_DEFINE_ERROR(OutOfRange, "out-of-range");
VJM_DEFINE_ERROR(SingularConfiguration, "singular-configuration");
VJM_DEFINE_ERROR(RankMismatch, "rank-mismatch");
VJM_DEFINE_ERROR(ConfigError, "config-error");

#undef VJM_DEFINE_ERROR

/// Raised when the load-corrected spring stiffness K_theta - H_thetatheta
/// cannot be inverted. Carries the offending eigenvalue.
class BucklingDetected : public Error {
public:
  BucklingDetected(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  const char* kind() const noexcept override { return "buckling-detected"; }
  double eigenvalue() const noexcept { return eigenvalue_; }

private:
  double eigenvalue_;
};

}  // namespace vjm
