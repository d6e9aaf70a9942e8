#include "krange/errors.hpp"

namespace krange {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::EmptySubspace: return "EmptySubspace";
    case ErrorKind::InvalidTuple: return "InvalidTuple";
    case ErrorKind::NotFullValidity: return "NotFullValidity";
    case ErrorKind::NotInRange: return "NotInRange";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::ZeroDefect: return "ZeroDefect";
  }
  return "Unknown";
}

}  // namespace krange
