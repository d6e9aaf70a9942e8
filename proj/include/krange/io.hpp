#pragma once

// File formats. A tuple file is
//   {"dim": d, "signature": [1, 1, -1], "ops": [matrix, ...], "meta": {...}}
// with each matrix {"rows", "cols", "data": [[re, im], ...]} in row-major
// order, and a vector file is {"dim": d, "data": [[re, im], ...]}. Floats
// are written with 17 significant digits so that load -> save is byte-stable.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "krange/tuples.hpp"

namespace krange::io {

using Json = nlohmann::ordered_json;

/// Malformed input or unreadable/unwritable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TupleFile {
  Index dim = 0;
  std::vector<int> signature;
  std::vector<Matrix> ops;
  Json meta;  // null when absent

  SignedOperatorTuple to_tuple(const Tolerances& tol = {}) const;
};

std::string format_number(double x);

std::string serialize_tuple(const TupleFile& file);
std::string serialize_tuple(const SignedOperatorTuple& tuple, const Json& meta = nullptr);
TupleFile parse_tuple(std::string_view text);

std::string serialize_vector(const Vector& v);
Vector parse_vector(std::string_view text);

/// [[re, im], ...]
Json complex_array(const Vector& v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace krange::io
