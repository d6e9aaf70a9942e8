#include "krange/krein.hpp"

#include <algorithm>

namespace krange {

Signature::Signature(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw Error(ErrorKind::InvalidArgument, "signature must have at least one entry");
  for (int s : signs_)
    if (s != 1 && s != -1) throw Error(ErrorKind::InvalidArgument, "signature entries must be +1 or -1");
}

Index Signature::positives() const {
  return static_cast<Index>(std::count(signs_.begin(), signs_.end(), 1));
}

RealVector Signature::metric(Index block_dim) const {
  RealVector j(size() * block_dim);
  for (Index b = 0; b < size(); ++b) j.segment(b * block_dim, block_dim).setConstant((*this)[b]);
  return j;
}

Signature Signature::prepend_negated(int lead) const {
  std::vector<int> out{lead};
  for (int s : signs_) out.push_back(-s);
  return Signature(std::move(out));
}

KreinVector::KreinVector(Signature signature, Vector stacked, Index block_dim)
    : signature_(std::move(signature)), stacked_(std::move(stacked)), block_dim_(block_dim) {
  if (block_dim_ < 0 || stacked_.size() != signature_.size() * block_dim_)
    throw Error(ErrorKind::ShapeMismatch, "KreinVector: stacked length != blocks * block_dim");
  if (!stacked_.allFinite()) throw Error(ErrorKind::NonFinite, "KreinVector: non-finite entry");
}

KreinVector::KreinVector(Signature signature, const std::vector<Vector>& blocks)
    : signature_(std::move(signature)), block_dim_(blocks.empty() ? 0 : blocks.front().size()) {
  if (static_cast<Index>(blocks.size()) != signature_.size())
    throw Error(ErrorKind::ShapeMismatch, "KreinVector: block count != signature length");
  stacked_.resize(signature_.size() * block_dim_);
  for (Index j = 0; j < signature_.size(); ++j) {
    const auto& b = blocks[static_cast<std::size_t>(j)];
    if (b.size() != block_dim_) throw Error(ErrorKind::ShapeMismatch, "KreinVector: blocks differ in dimension");
    stacked_.segment(j * block_dim_, block_dim_) = b;
  }
  if (!stacked_.allFinite()) throw Error(ErrorKind::NonFinite, "KreinVector: non-finite entry");
}

KreinVector KreinVector::zero(Signature signature, Index block_dim) {
  const Index n = signature.size();
  return KreinVector(std::move(signature), Vector::Zero(n * block_dim), block_dim);
}

KreinVector KreinVector::operator-(const KreinVector& other) const {
  if (!(signature_ == other.signature_) || block_dim_ != other.block_dim_)
    throw Error(ErrorKind::ShapeMismatch, "KreinVector: operands live in different spaces");
  return KreinVector(signature_, stacked_ - other.stacked_, block_dim_);
}

Complex krein_inner(const KreinVector& x, const KreinVector& y) {
  if (!(x.signature() == y.signature()) || x.block_dim() != y.block_dim())
    throw Error(ErrorKind::ShapeMismatch, "krein_inner: signatures or block dimensions differ");
  Complex sum = 0.0;
  for (Index j = 0; j < x.blocks(); ++j) sum += double(x.signature()[j]) * y.block(j).dot(x.block(j));
  return sum;
}

double j_norm_squared(const KreinVector& x) { return x.stacked().squaredNorm(); }

Subspace::Subspace(Signature signature, Index block_dim, Matrix basis)
    : signature_(std::move(signature)), block_dim_(block_dim), basis_(std::move(basis)) {
  if (basis_.rows() != ambient_dim())
    throw Error(ErrorKind::ShapeMismatch, "Subspace: basis rows != n * block_dim");
  if (basis_.cols() > 0) (void)orthonormalize(basis_);
}

Matrix Subspace::krein_gram() const {
  const RealVector j = signature_.metric(block_dim_);
  return basis_.adjoint() * j.cast<Complex>().asDiagonal() * basis_;
}

PositivityBound uniform_positivity_bound(const Subspace& m, const Tolerances& tol) {
  if (m.dim() == 0) throw Error(ErrorKind::EmptySubspace, "uniform_positivity_bound: empty basis");
  const Matrix q = orthonormalize(m.basis());
  const RealVector j = m.signature().metric(m.block_dim());
  const Matrix h = q.adjoint() * j.cast<Complex>().asDiagonal() * q;
  const auto d = hermitian_eig<double>(0.5 * (h + h.adjoint()));
  PositivityBound out;
  out.delta = d.eigenvalues(0);
  out.uniformly_positive = out.delta > tol.positivity;
  return out;
}

}  // namespace krange
