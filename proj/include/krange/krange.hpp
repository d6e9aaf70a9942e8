#pragma once

#include "krange/dbr.hpp"
#include "krange/errors.hpp"
#include "krange/generators.hpp"
#include "krange/krein.hpp"
#include "krange/localstruct.hpp"
#include "krange/numerics.hpp"
#include "krange/solver.hpp"
#include "krange/tolerances.hpp"
#include "krange/tuples.hpp"

namespace krange {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace krange
