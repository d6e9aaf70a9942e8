#include "krange/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace krange::io {

namespace {

void append_complex_list(std::string& out, const Complex* data, Index count) {
  out += '[';
  for (Index k = 0; k < count; ++k) {
    if (k > 0) out += ", ";
    out += '[';
    out += format_number(data[k].real());
    out += ", ";
    out += format_number(data[k].imag());
    out += ']';
  }
  out += ']';
}

std::vector<Complex> read_complex_list(const Json& data, std::size_t expected, const char* what) {
  if (!data.is_array() || data.size() != expected)
    throw IoError(std::string(what) + ": \"data\" must be an array of " + std::to_string(expected) + " [re, im] pairs");
  std::vector<Complex> out;
  out.reserve(expected);
  for (const auto& pair : data) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw IoError(std::string(what) + ": entries must be [re, im] number pairs");
    const Complex z(pair[0].get<double>(), pair[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw IoError(std::string(what) + ": non-finite entry");
    out.push_back(z);
  }
  return out;
}

Index read_count(const Json& obj, const char* key, const char* what) {
  if (!obj.contains(key) || !obj[key].is_number_integer() || obj[key].get<long long>() < 1)
    throw IoError(std::string(what) + ": \"" + key + "\" must be a positive integer");
  return static_cast<Index>(obj[key].get<long long>());
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SignedOperatorTuple TupleFile::to_tuple(const Tolerances& tol) const {
  return SignedOperatorTuple(ops, Signature(signature), tol);
}

std::string serialize_tuple(const TupleFile& file) {
  std::string out = "{\n  \"dim\": " + std::to_string(file.dim) + ",\n  \"signature\": [";
  for (std::size_t j = 0; j < file.signature.size(); ++j) {
    if (j > 0) out += ", ";
    out += std::to_string(file.signature[j]);
  }
  out += "],\n  \"ops\": [\n";
  for (std::size_t j = 0; j < file.ops.size(); ++j) {
    const Matrix& m = file.ops[j];
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = m;
    out += "    {\"rows\": " + std::to_string(m.rows()) + ", \"cols\": " + std::to_string(m.cols()) + ", \"data\": ";
    append_complex_list(out, row_major.data(), row_major.size());
    out += j + 1 < file.ops.size() ? "},\n" : "}\n";
  }
  out += "  ]";
  if (!file.meta.is_null()) out += ",\n  \"meta\": " + file.meta.dump();
  out += "\n}\n";
  return out;
}

std::string serialize_tuple(const SignedOperatorTuple& tuple, const Json& meta) {
  return serialize_tuple(TupleFile{tuple.dim(), tuple.signature().signs(), tuple.ops(), meta});
}

TupleFile parse_tuple(std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw IoError("tuple file: top level must be an object");
  TupleFile f;
  f.dim = read_count(j, "dim", "tuple file");
  if (!j.contains("signature") || !j["signature"].is_array() || j["signature"].empty())
    throw IoError("tuple file: \"signature\" must be a nonempty array");
  for (const auto& s : j["signature"]) {
    if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1))
      throw IoError("tuple file: signature entries must be 1 or -1");
    f.signature.push_back(s.get<int>());
  }
  if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].size() != f.signature.size())
    throw IoError("tuple file: \"ops\" must be an array with one matrix per signature entry");
  for (const auto& m : j["ops"]) {
    if (!m.is_object()) throw IoError("tuple file: each op must be an object");
    const Index rows = read_count(m, "rows", "matrix");
    const Index cols = read_count(m, "cols", "matrix");
    if (rows != f.dim || cols != f.dim) throw IoError("tuple file: ops must be dim x dim");
    if (!m.contains("data")) throw IoError("matrix: missing \"data\"");
    const auto entries = read_complex_list(m["data"], static_cast<std::size_t>(rows * cols), "matrix");
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index c = 0; c < cols; ++c) out(i, c) = entries[static_cast<std::size_t>(i * cols + c)];
    f.ops.push_back(std::move(out));
  }
  if (j.contains("meta")) f.meta = j["meta"];
  return f;
}

Json complex_array(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(Json::array({v(i).real(), v(i).imag()}));
  return a;
}

std::string serialize_vector(const Vector& v) {
  std::string out = "{\"dim\": " + std::to_string(v.size()) + ", \"data\": ";
  append_complex_list(out, v.data(), v.size());
  out += "}\n";
  return out;
}

Vector parse_vector(std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw IoError("vector file: top level must be an object");
  const Index dim = read_count(j, "dim", "vector file");
  if (!j.contains("data")) throw IoError("vector file: missing \"data\"");
  const auto entries = read_complex_list(j["data"], static_cast<std::size_t>(dim), "vector file");
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = entries[static_cast<std::size_t>(i)];
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace krange::io
