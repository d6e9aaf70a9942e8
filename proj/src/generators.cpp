#include "krange/generators.hpp"

#include <cmath>
#include <numbers>

#include "krange/random.hpp"

namespace krange {

Matrix toeplitz_analytic(const Coefficients& coeffs, Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "toeplitz_analytic: n must be >= 1");
  Matrix t = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i - j);
      if (k < coeffs.size()) t(i, j) = coeffs[k];
    }
  return t;
}

Coefficients convolve(const Coefficients& phi, const Coefficients& psi) {
  if (phi.empty() || psi.empty()) return {};
  Coefficients out(phi.size() + psi.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) out[i + j] += phi[i] * psi[j];
  return out;
}

namespace {

Complex evaluate(const Coefficients& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Coefficients add(const Coefficients& a, const Coefficients& b) {
  Coefficients out(std::max(a.size(), b.size()), Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

}  // namespace

double symbol_sup_sq(const Coefficients& a, const Coefficients& b, int samples) {
  double sup = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
    sup = std::max(sup, std::norm(evaluate(a, z)) + std::norm(evaluate(b, z)));
  }
  return sup;
}

CoronaTriplet corona_triplet(const Coefficients& phi1, const Coefficients& phi2, const Coefficients& psi1,
                             const Coefficients& psi2, Index n) {
  const Coefficients phi3 = add(convolve(phi1, psi1), convolve(phi2, psi2));
  const double row = symbol_sup_sq(phi1, phi2);
  const double column = symbol_sup_sq(psi1, psi2);
  std::vector<std::string> warnings;
  if (row > 1.0 + 1e-9) warnings.push_back("row symbol exceeds 1 on the circle: " + std::to_string(row));
  if (column > 1.0 + 1e-9) warnings.push_back("column symbol exceeds 1 on the circle: " + std::to_string(column));

  SignedOperatorTuple tuple({toeplitz_analytic(phi1, n), toeplitz_analytic(phi2, n), toeplitz_analytic(phi3, n)},
                            Signature::triplet());
  if (tuple.level() != Validity::Full) {
    std::string msg = "corona triplet validates as " + std::string(to_string(tuple.level()));
    for (const auto& w : warnings) msg += "; " + w;
    throw Error(ErrorKind::InvalidTuple, msg);
  }
  return CoronaTriplet{std::move(tuple), phi3, row, column, std::move(warnings)};
}

Matrix down_shift(Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "down_shift: n must be >= 1");
  Matrix s = Matrix::Zero(n, n);
  for (Index k = 0; k + 1 < n; ++k) s(k + 1, k) = 1.0;
  return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SignedOperatorTuple bidisk_triplet(Index n) {
  const Matrix s = down_shift(n);
  const Matrix id = Matrix::Identity(n, n);
  return SignedOperatorTuple({kron(s, id), kron(id, s), kron(s, s)}, Signature::triplet());
}

SignedOperatorTuple random_tuple(int positives, int negatives, Index dim, std::uint64_t seed, double margin) {
  if (positives < 1 || negatives < 0)
    throw Error(ErrorKind::InvalidArgument, "random_tuple: need >= 1 positive and >= 0 negative operators");
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "random_tuple: dim must be >= 1");
  if (!(margin > 0.0 && margin < 1.0)) throw Error(ErrorKind::InvalidArgument, "random_tuple: margin must be in (0, 1)");

  Rng rng(seed);
  Matrix row = gaussian_matrix(rng, dim, positives * dim);
  row *= (1.0 - margin) / operator_norm<double>(row);

  std::vector<Matrix> ops;
  std::vector<int> signs;
  for (int j = 0; j < positives; ++j) {
    ops.push_back(row.middleCols(j * dim, dim));
    signs.push_back(1);
  }
  if (negatives > 0) {
    Matrix column = gaussian_matrix(rng, positives * dim, negatives * dim);
    column *= (1.0 - margin) / operator_norm<double>(column);
    const Matrix product = row * column;
    for (int k = 0; k < negatives; ++k) {
      ops.push_back(product.middleCols(k * dim, dim));
      signs.push_back(-1);
    }
  }
  return SignedOperatorTuple(std::move(ops), Signature(std::move(signs)));
}

}  // namespace krange
