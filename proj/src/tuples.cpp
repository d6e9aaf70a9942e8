#include "krange/tuples.hpp"

#include <algorithm>
#include <cmath>

#include "krange/random.hpp"

namespace krange {

const char* to_string(Validity v) noexcept {
  switch (v) {
    case Validity::Invalid: return "invalid";
    case Validity::Lower: return "lower";
    case Validity::Full: return "full";
  }
  return "invalid";
}

namespace {

Index check_shapes(const std::vector<Matrix>& ops, const Signature& signature) {
  if (static_cast<Index>(ops.size()) != signature.size())
    throw Error(ErrorKind::ShapeMismatch, "tuple: operator count != signature length");
  const Index d = ops.front().rows();
  for (const auto& t : ops) {
    if (t.rows() != d || t.cols() != d)
      throw Error(ErrorKind::ShapeMismatch, "tuple: operators must be square of a common dimension");
    require_finite(t, "tuple");
  }
  return d;
}

Matrix signed_gram(const std::vector<Matrix>& ops, const Signature& signature) {
  const Index d = ops.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (Index j = 0; j < signature.size(); ++j) {
    const auto& t = ops[static_cast<std::size_t>(j)];
    sum.noalias() += double(signature[j]) * (t * t.adjoint());
  }
  return sum;
}

ValidationReport classify(const SpectralDecomposition<double>& d, const Tolerances& tol) {
  ValidationReport r;
  const Index n = d.size();
  r.min_eig_defect = n > 0 ? d.eigenvalues(0) : 0.0;
  r.max_eig_defect = n > 0 ? d.eigenvalues(n - 1) : 0.0;
  std::vector<Index> bad;
  if (r.min_eig_defect < -tol.psd) {
    r.level = Validity::Invalid;
    for (Index i = 0; i < n; ++i)
      if (d.eigenvalues(i) < -tol.psd) bad.push_back(i);
  } else if (r.max_eig_defect > 1.0 + tol.psd) {
    r.level = Validity::Lower;
    for (Index i = 0; i < n; ++i)
      if (d.eigenvalues(i) > 1.0 + tol.psd) bad.push_back(i);
  } else {
    r.level = Validity::Full;
  }
  r.witnesses.resize(n, static_cast<Index>(bad.size()));
  for (std::size_t k = 0; k < bad.size(); ++k) r.witnesses.col(static_cast<Index>(k)) = d.eigenvectors.col(bad[k]);
  return r;
}

}  // namespace

ValidationReport validate(const std::vector<Matrix>& ops, const Signature& signature, const Tolerances& tol) {
  if (ops.empty()) throw Error(ErrorKind::ShapeMismatch, "validate: empty tuple");
  check_shapes(ops, signature);
  const Matrix d = signed_gram(ops, signature);
  return classify(hermitian_eig<double>(d), tol);
}

SignedOperatorTuple::SignedOperatorTuple(std::vector<Matrix> ops, Signature signature, Tolerances tol)
    : ops_(std::move(ops)), signature_(std::move(signature)), tol_(tol) {
  if (ops_.empty()) throw Error(ErrorKind::ShapeMismatch, "tuple: no operators");
  dim_ = check_shapes(ops_, signature_);
  defect_ = signed_gram(ops_, signature_);
  if (!is_hermitian(defect_))
    throw Error(ErrorKind::NotHermitian, "tuple: defect operator is not Hermitian");
  defect_ = 0.5 * (defect_ + defect_.adjoint());

  const auto d = hermitian_eig<double>(defect_);
  validation_ = classify(d, tol_);
  if (validation_.level != Validity::Invalid) {
    spectrum_.eigenvectors = d.eigenvectors;
    spectrum_.eigenvalues = d.eigenvalues.unaryExpr([](double x) { return std::sqrt(std::max(x, 0.0)); });
    sqrt_ = spectrum_.reconstruct();
  }
  op_norms_.reserve(ops_.size());
  for (const auto& t : ops_) op_norms_.push_back(operator_norm<double>(t));
}

void SignedOperatorTuple::require_lower() const {
  if (validation_.level == Validity::Invalid)
    throw Error(ErrorKind::InvalidTuple, "defect operator has eigenvalue " +
                                             std::to_string(validation_.min_eig_defect) + " < 0");
}

const Matrix& SignedOperatorTuple::defect_sqrt() const {
  require_lower();
  return sqrt_;
}

const SpectralDecomposition<double>& SignedOperatorTuple::spectrum() const {
  require_lower();
  return spectrum_;
}

double SignedOperatorTuple::norm() const {
  const auto& s = spectrum();
  return s.size() > 0 ? s.eigenvalues(s.size() - 1) : 0.0;
}

double SignedOperatorTuple::rank_tol() const { return tol_.rank_cutoff(norm()); }

Matrix SignedOperatorTuple::range_basis() const { return eigenvectors_above(spectrum(), rank_tol()); }

double SignedOperatorTuple::smallest_positive_eigenvalue() const {
  const auto& s = spectrum();
  const double cut = rank_tol();
  for (Index i = 0; i < s.size(); ++i)
    if (s.eigenvalues(i) > cut) return s.eigenvalues(i);
  return 0.0;
}

double SignedOperatorTuple::max_op_norm() const { return *std::max_element(op_norms_.begin(), op_norms_.end()); }

SignedOperatorTuple SignedOperatorTuple::scaled(double c) const {
  std::vector<Matrix> ops;
  for (const auto& t : ops_) ops.push_back(c * t);
  return SignedOperatorTuple(std::move(ops), signature_, tol_);
}

const Matrix& defect_sqrt(const SignedOperatorTuple& tuple) { return tuple.defect_sqrt(); }

Vector bT_apply(const SignedOperatorTuple& tuple, const KreinVector& z) {
  if (!(z.signature() == tuple.signature()) || z.block_dim() != tuple.dim())
    throw Error(ErrorKind::ShapeMismatch, "bT_apply: vector does not live in the tuple's Krein space");
  Vector out = Vector::Zero(tuple.dim());
  for (Index j = 0; j < tuple.size(); ++j) out.noalias() += double(tuple.signature()[j]) * (tuple.op(j) * z.block(j));
  return out;
}

KreinVector bT_sharp(const SignedOperatorTuple& tuple, const Vector& x) {
  if (x.size() != tuple.dim()) throw Error(ErrorKind::ShapeMismatch, "bT_sharp: dimension mismatch");
  return KreinVector(tuple.signature(), bT_sharp_columns(tuple, x).col(0), tuple.dim());
}

Matrix bT_sharp_columns(const SignedOperatorTuple& tuple, const Matrix& x) {
  if (x.rows() != tuple.dim()) throw Error(ErrorKind::ShapeMismatch, "bT_sharp: dimension mismatch");
  const Index d = tuple.dim();
  Matrix out(tuple.size() * d, x.cols());
  for (Index j = 0; j < tuple.size(); ++j) out.middleRows(j * d, d).noalias() = tuple.op(j).adjoint() * x;
  return out;
}

Matrix bT_apply_columns(const SignedOperatorTuple& tuple, const Matrix& z) {
  const Index d = tuple.dim();
  if (z.rows() != tuple.size() * d) throw Error(ErrorKind::ShapeMismatch, "bT_apply: dimension mismatch");
  Matrix out = Matrix::Zero(d, z.cols());
  for (Index j = 0; j < tuple.size(); ++j)
    out.noalias() += double(tuple.signature()[j]) * (tuple.op(j) * z.middleRows(j * d, d));
  return out;
}

double isometry_check(const SignedOperatorTuple& tuple, int samples, std::uint64_t seed) {
  const Matrix& t = tuple.defect_sqrt();
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector x = random_unit_vector(rng, tuple.dim());
    const KreinVector z = bT_sharp(tuple, x);
    const Complex k_norm = krein_inner(z, z);
    worst = std::max(worst, std::abs((t * x).squaredNorm() - k_norm.real()));
    worst = std::max(worst, std::abs(k_norm.imag()));
  }
  return worst;
}

double adjoint_check(const SignedOperatorTuple& tuple, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const double scale = std::max(1.0, tuple.max_op_norm());
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector x = gaussian_vector(rng, tuple.dim());
    const KreinVector z(tuple.signature(), gaussian_vector(rng, tuple.size() * tuple.dim()), tuple.dim());
    const Complex lhs = bT_apply(tuple, z).dot(x);
    const Complex rhs = krein_inner(bT_sharp(tuple, x), z);
    worst = std::max(worst, std::abs(lhs - rhs) / (scale * x.norm() * z.stacked().norm()));
  }
  return worst;
}

TTildeReport ttilde_properties(const SignedOperatorTuple& tuple) {
  TTildeReport r;
  const Matrix w = tuple.range_basis();
  r.range_dim = w.cols();
  if (r.range_dim == 0) {
    r.vacuous = true;
    r.injective = true;
    r.image_is_range = true;
    return r;
  }
  const Matrix image = bT_apply_columns(tuple, bT_sharp_columns(tuple, w));
  const auto sv = singular_triplets<double>(image, tuple.tolerances().rank_rel, tuple.tolerances().rank_abs);
  r.injective = sv.rank() == r.range_dim;
  r.injectivity_sigma_min = sv.rank() > 0 ? sv.sigma(0) : 0.0;
  const Matrix& q = sv.u;
  const double a = (w - q * (q.adjoint() * w)).norm();
  const double b = (q - w * (w.adjoint() * q)).norm();
  r.image_residual = std::max(a, b);
  r.image_is_range = sv.rank() == r.range_dim && r.image_residual <= 1e-8;
  return r;
}

}  // namespace krange
