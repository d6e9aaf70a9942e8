#pragma once

#include <stdexcept>
#include <string>

namespace krange {

enum class ErrorKind {
  ShapeMismatch,
  NonFinite,
  InvalidArgument,
  NotHermitian,
  NoConvergence,
  NotPSD,
  DegenerateBasis,
  EmptySubspace,
  InvalidTuple,
  NotFullValidity,
  NotInRange,
  NotContraction,
  ZeroDefect,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library failure. Every throw site in krange uses this type; `kind()` is
/// what callers should branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace krange
